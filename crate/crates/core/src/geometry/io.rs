//! Matrix generator files.
//!
//! ```text
//! GF 2 2            # optional: modulus 1 1 1
//! dim 3
//! form hermitian
//! gen
//! 1 1 0
//! 0 1 0
//! 0 0 1
//! twist 1           # optional, per generator
//! duality           # optional, per generator
//! ```
//! Entries encode coefficient vectors in base p, constant term least
//! significant.

use super::actions::SemilinearMap;
use super::field::Fq;
use super::forms::{FormKind, FormSpace};
use super::linalg::Mat;
use super::GeomError;

#[derive(Debug, Clone)]
pub struct MatrixGenFile {
    pub field: Fq,
    pub n: usize,
    pub form: FormKind,
    pub gens: Vec<SemilinearMap>,
}

impl MatrixGenFile {
    pub fn form_space(&self) -> Result<FormSpace, GeomError> {
        FormSpace::standard_over(self.form, self.n, self.field.clone())
    }
}

fn syntax(line: usize, msg: impl Into<String>) -> GeomError {
    GeomError::Syntax { line, msg: msg.into() }
}

fn parse_u32(tok: &str, line: usize) -> Result<u32, GeomError> {
    tok.parse().map_err(|_| syntax(line, format!("expected an integer, got {tok:?}")))
}

pub fn parse_matrix_file(text: &str) -> Result<MatrixGenFile, GeomError> {
    let mut field: Option<Fq> = None;
    let mut n: Option<usize> = None;
    let mut form = FormKind::Trivial;
    let mut gens: Vec<SemilinearMap> = Vec::new();
    let mut pending: Option<(usize, Vec<Vec<u32>>)> = None;

    let lines: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap().trim()))
        .filter(|(_, l)| !l.is_empty())
        .collect();

    let finish = |pending: &mut Option<(usize, Vec<Vec<u32>>)>, gens: &mut Vec<SemilinearMap>| {
        if let Some((start, rows)) = pending.take() {
            if rows.is_empty() || rows.len() != rows[0].len() {
                return Err(syntax(start, "generator block is incomplete"));
            }
            gens.push(SemilinearMap::linear(Mat::from_rows(&rows)));
        }
        Ok(())
    };

    for &(ln, l) in &lines {
        let toks: Vec<&str> = l.split_whitespace().collect();
        match toks[0] {
            "GF" => {
                if toks.len() < 3 {
                    return Err(syntax(ln, "GF needs p and e"));
                }
                let p = parse_u32(toks[1], ln)?;
                let e = parse_u32(toks[2], ln)?;
                let f = if toks.get(3) == Some(&"modulus") {
                    let coeffs =
                        toks[4..].iter().map(|t| parse_u32(t, ln)).collect::<Result<Vec<_>, _>>()?;
                    if coeffs.len() != e as usize + 1 {
                        return Err(syntax(ln, format!("modulus needs {} coefficients", e + 1)));
                    }
                    if !crate::numtheory::is_prime(p as u64) {
                        return Err(syntax(ln, format!("{p} is not prime")));
                    }
                    Fq::with_modulus(p, coeffs)?
                } else {
                    Fq::new(p, e)?
                };
                field = Some(f);
            }
            "dim" => {
                n = Some(parse_u32(toks.get(1).ok_or_else(|| syntax(ln, "dim needs a value"))?, ln)? as usize);
            }
            "form" => {
                form = FormKind::parse(toks.get(1).copied().unwrap_or(""), toks.get(2).copied())
                    .ok_or_else(|| syntax(ln, format!("unknown form {l:?}")))?;
            }
            "gen" => {
                finish(&mut pending, &mut gens)?;
                pending = Some((ln, Vec::new()));
            }
            "twist" | "duality" => {
                finish(&mut pending, &mut gens)?;
                let g = gens.last_mut().ok_or_else(|| syntax(ln, "modifier before any generator"))?;
                if toks[0] == "twist" {
                    g.twist = parse_u32(toks.get(1).ok_or_else(|| syntax(ln, "twist needs a value"))?, ln)?;
                } else {
                    g.duality = true;
                }
            }
            _ => {
                let f = field.as_ref().ok_or_else(|| syntax(ln, "matrix row before GF line"))?;
                let dim = n.ok_or_else(|| syntax(ln, "matrix row before dim line"))?;
                let (_, rows) = pending.as_mut().ok_or_else(|| syntax(ln, format!("unexpected line {l:?}")))?;
                let row = toks.iter().map(|t| parse_u32(t, ln)).collect::<Result<Vec<_>, _>>()?;
                if row.len() != dim {
                    return Err(syntax(ln, format!("row has {} entries, expected {dim}", row.len())));
                }
                if let Some(&bad) = row.iter().find(|&&x| x >= f.q()) {
                    return Err(syntax(ln, format!("entry {bad} is not an element of GF({})", f.q())));
                }
                if rows.len() == dim {
                    return Err(syntax(ln, "too many rows in generator block"));
                }
                rows.push(row);
            }
        }
    }
    finish(&mut pending, &mut gens)?;
    let field = field.ok_or_else(|| syntax(1, "missing GF line"))?;
    let n = n.ok_or_else(|| syntax(1, "missing dim line"))?;
    for (i, g) in gens.iter().enumerate() {
        if g.mat.n != n {
            return Err(GeomError::Param(format!("generator {} has size {}", i + 1, g.mat.n)));
        }
        if g.mat.inverse(&field).is_none() {
            return Err(GeomError::Param(format!("generator {} is singular", i + 1)));
        }
    }
    Ok(MatrixGenFile { field, n, form, gens })
}

pub fn emit_matrix_file(file: &MatrixGenFile) -> String {
    let f = &file.field;
    let mut out = format!("GF {} {} modulus", f.p(), f.e());
    for c in f.modulus() {
        out.push_str(&format!(" {c}"));
    }
    out.push_str(&format!("\ndim {}\n", file.n));
    let form = match file.form {
        FormKind::Quadratic(e) => format!("quadratic {}", e.symbol()),
        k => k.label(),
    };
    out.push_str(&format!("form {form}\n"));
    for g in &file.gens {
        out.push_str("gen\n");
        for i in 0..g.mat.n {
            let row: Vec<String> = g.mat.row(i).iter().map(|x| x.to_string()).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        if g.twist != 0 {
            out.push_str(&format!("twist {}\n", g.twist));
        }
        if g.duality {
            out.push_str("duality\n");
        }
    }
    out
}
