//! Command-line front end. `run` returns the process exit code: 0 for a
//! positive answer, 1 for a computed negative answer, 2 for bad input.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde_json::{json, Value};

use crate::bounds::scans::{dagger_scan, nonsubspace_scan, small_dim_scan, Scan};
use crate::bounds::{certify_case, Case, ExternalTables, Family, GroupId, Options, Verdict};
use crate::geometry::domains::{
    anisotropic_2_subspaces, maximal_totally_singular, nondegenerate_points, pair_domains, quadratic_forms_polarizing,
    singular_points,
};
use crate::geometry::io::parse_matrix_file;
use crate::geometry::{
    induced_on_ksets, isometry_generators, perm_image, product_action, Domain, Eps, FormKind, FormSpace,
    SemilinearMap,
};
use crate::perm::{emit_group_file, parse_cycles_line, parse_group_file, PermError, PermGroup, Permutation};
use crate::regcycle::{compare_actions_monotonic, fix_union_test, verify_all_elements, verify_with_chain, VerdictRecord};

pub const DEFAULT_DOMAIN_CAP: usize = 1_000_000;
pub const DEFAULT_ELEMENT_CAP: usize = 10_000_000;

#[derive(Debug, Parser)]
#[command(name = "regcyc", version, about = "Regular cycles and fixed-point ratio bounds for permutation groups")]
pub struct Cli {
    /// Machine-readable output on stdout.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum CaseArg {
    I,
    Ii,
    Iii,
    Iv,
    Vi,
    Triality,
    SmallDim,
}

impl CaseArg {
    fn case(self) -> Case {
        match self {
            CaseArg::I => Case::I,
            CaseArg::Ii => Case::Ii,
            CaseArg::Iii => Case::Iii,
            CaseArg::Iv => Case::Iv,
            CaseArg::Vi => Case::Vi,
            CaseArg::Triality => Case::Triality,
            CaseArg::SmallDim => Case::SmallDim,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Theorem {
    SmallDim,
    Nonsubspace,
    Dagger,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ActionType {
    Ksets,
    Product,
    SingularPoints,
    Ns1,
    Aniso2,
    Maxts,
    Forms,
    PairsLe,
    PairsPerp,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Regular-cycle test for one element, or for each generator.
    Check {
        #[arg(long)]
        group: PathBuf,
        /// 1-based disjoint cycles, e.g. "(1 2 3)(4 5)".
        #[arg(long)]
        element: Option<String>,
    },
    /// Check every element of the group (or every element of square-free order).
    Verify {
        #[arg(long)]
        group: PathBuf,
        #[arg(long)]
        square_free_only: bool,
        #[arg(long, default_value_t = DEFAULT_ELEMENT_CAP)]
        cap: usize,
        /// Known group order; enables the stabilizer-chain walk past the cap.
        #[arg(long)]
        order: Option<BigUint>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Evaluate the bound S(g,Ω) < 1 for a socle type and action case.
    Certify {
        #[arg(long, value_enum)]
        case: CaseArg,
        #[arg(long)]
        family: Option<String>,
        #[arg(long)]
        n: Option<u32>,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        tables: Option<PathBuf>,
        /// Report the plain bound only.
        #[arg(long)]
        no_refinements: bool,
    },
    /// List the socle types that the generic bounds leave open.
    Scan {
        #[arg(long, value_enum)]
        theorem: Theorem,
        #[arg(long)]
        tables: Option<PathBuf>,
    },
    /// Build a permutation action and write it as a group file.
    BuildAction {
        #[arg(long = "type", value_enum)]
        kind: ActionType,
        /// ksets: degree of the symmetric group (ignored with --base).
        #[arg(long)]
        m: Option<usize>,
        /// ksets: subset size; pairs: dimension of the smaller subspace.
        #[arg(long)]
        k: Option<usize>,
        /// product: number of coordinates.
        #[arg(long)]
        r: Option<usize>,
        /// Group file acted on (ksets, product).
        #[arg(long)]
        base: Option<PathBuf>,
        /// Matrix generator file; replaces --form/--n/--q.
        #[arg(long)]
        gens: Option<PathBuf>,
        /// trivial, symplectic, hermitian or quadratic.
        #[arg(long)]
        form: Option<String>,
        /// Type of the quadratic form (+, -, o); for --type forms, the type of
        /// the forms in the domain.
        #[arg(long)]
        eps: Option<String>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        q: Option<u32>,
        /// ns1: which orbit of non-degenerate points (0-based).
        #[arg(long, default_value_t = 0)]
        part: usize,
        /// Number of random isometry generators.
        #[arg(long, default_value_t = 6)]
        count: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Append the duality W ↦ W^⊥ to the generators.
        #[arg(long)]
        duality: bool,
        #[arg(long, default_value_t = DEFAULT_DOMAIN_CAP)]
        cap: usize,
        #[arg(long)]
        out: PathBuf,
        /// Domain labels; defaults to OUT.labels.
        #[arg(long)]
        labels: Option<PathBuf>,
    },
    /// Compare regular-cycle counts of two actions with matching generators.
    Compare {
        /// Optional group file whose generator count must match the actions.
        #[arg(long)]
        group: Option<PathBuf>,
        #[arg(long)]
        action1: PathBuf,
        #[arg(long)]
        action2: PathBuf,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

type Res = Result<i32, String>;

pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if e.use_stderr() { write!(err, "{}", e.render()) } else { write!(out, "{}", e.render()) };
            return code;
        }
    };
    match dispatch(&cli, out) {
        Ok(code) => code,
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
    }
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> Res {
    let json = cli.json;
    match &cli.command {
        Command::Check { group, element } => check(group, element.as_deref(), json, out),
        Command::Verify { group, square_free_only, cap, order, seed } => {
            verify(group, *square_free_only, *cap, order.as_ref(), *seed, json, out)
        }
        Command::Certify { case, family, n, q, tables, no_refinements } => {
            certify(*case, family.as_deref(), *n, *q, tables.as_deref(), !no_refinements, json, out)
        }
        Command::Scan { theorem, tables } => scan(*theorem, tables.as_deref(), json, out),
        Command::BuildAction { .. } => build_action(&cli.command, json, out),
        Command::Compare { group, action1, action2, samples, seed } => {
            compare(group.as_deref(), action1, action2, *samples, *seed, json, out)
        }
    }
}

fn read(path: &Path) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn load_group(path: &Path) -> Result<PermGroup, String> {
    parse_group_file(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))
}

fn load_tables(path: Option<&Path>) -> Result<Option<ExternalTables>, String> {
    match path {
        None => Ok(None),
        Some(p) => ExternalTables::from_json(&read(p)?).map(Some).map_err(|e| format!("{}: {e}", p.display())),
    }
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), String> {
    out.write_all(text.as_bytes()).map_err(|e| format!("writing output: {e}"))
}

fn emit_json(out: &mut dyn Write, v: &Value) -> Result<(), String> {
    emit(out, &format!("{}\n", serde_json::to_string_pretty(v).expect("json")))
}

fn group_name(path: &Path) -> String {
    path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
}

fn check(path: &Path, element: Option<&str>, json: bool, out: &mut dyn Write) -> Res {
    let g = load_group(path)?;
    let elems: Vec<Permutation> = match element {
        Some(s) => vec![parse_cycles_line(s, g.degree(), 1).map_err(|e| format!("--element: {e}"))?],
        None => g.generators().to_vec(),
    };
    let mut rows = Vec::new();
    let mut all = true;
    let mut text = String::new();
    for x in &elems {
        let r = fix_union_test(x);
        let direct = x.has_regular_cycle_direct();
        if direct != r.has_regular_cycle {
            return Err(format!("fix-union and direct tests disagree on {x}"));
        }
        all &= r.has_regular_cycle;
        let witness = r.witness.map(|(s, l)| json!({"start": s + 1, "length": l}));
        rows.push(json!({
            "element": x.to_string(),
            "order": r.order,
            "has_regular_cycle": r.has_regular_cycle,
            "witness": witness,
            "fix_union_size": r.fix_union_size,
            "s_value": r.s_value.to_string(),
        }));
        let verdict = match r.witness {
            Some((s, l)) => format!("regular cycle through {} (length {l})", s + 1),
            None => format!("no cycle of length {}", r.order),
        };
        text.push_str(&format!(
            "{x}\n  order {}  |fix union| {}/{}  S = {}  {verdict}\n",
            r.order, r.fix_union_size, r.degree, r.s_value
        ));
    }
    if json {
        emit_json(
            out,
            &json!({
                "schema": 1,
                "group": group_name(path),
                "degree": g.degree(),
                "verdict": if all { "all-regular" } else { "fails" },
                "elements": rows,
            }),
        )?;
    } else {
        emit(out, &text)?;
    }
    Ok(if all { 0 } else { 1 })
}

fn verify(
    path: &Path,
    square_free_only: bool,
    cap: usize,
    order: Option<&BigUint>,
    seed: u64,
    json: bool,
    out: &mut dyn Write,
) -> Res {
    let g = load_group(path)?;
    let report = match (verify_all_elements(&g, cap, square_free_only), order) {
        (Ok(r), _) => r,
        (Err(PermError::CapExceeded(_)), Some(o)) => verify_with_chain(&g, o, square_free_only, seed)?,
        (Err(e), _) => return Err(format!("{e}; pass --order to walk a stabilizer chain instead")),
    };
    let rec = VerdictRecord::from_verify(&group_name(path), g.degree(), &report);
    if json {
        let mut v = serde_json::to_value(&rec).expect("json");
        v["group_order"] = json!(report.group_order);
        v["checked"] = json!(report.checked);
        v["failing"] = json!(report.failing);
        v["square_free_only"] = json!(square_free_only);
        emit_json(out, &v)?;
    } else {
        let mut text = format!(
            "degree {}  order {}  checked {}  failing {}  max S = {}\n",
            g.degree(),
            report.group_order,
            report.checked,
            report.failing,
            report.max_s_value
        );
        for w in &report.witnesses {
            text.push_str(&format!("  no regular cycle: {w}\n"));
        }
        text.push_str(if report.failing == 0 { "all-regular\n" } else { "fails\n" });
        emit(out, &text)?;
    }
    Ok(if report.failing == 0 { 0 } else { 1 })
}

#[allow(clippy::too_many_arguments)]
fn certify(
    case: CaseArg,
    family: Option<&str>,
    n: Option<u32>,
    q: u64,
    tables: Option<&Path>,
    refinements: bool,
    json: bool,
    out: &mut dyn Write,
) -> Res {
    let id = match case {
        CaseArg::Triality => GroupId::new(Family::OmegaPlus, 8, q),
        _ => {
            let f = family.ok_or("--family is required")?;
            let f = Family::parse(f).ok_or_else(|| format!("unknown family {f:?}"))?;
            GroupId::new(f, n.ok_or("--n is required")?, q)
        }
    }
    .map_err(|e| e.to_string())?;
    let tables = load_tables(tables)?;
    let opts = Options { refinements, tables: tables.as_ref() };
    let rep = certify_case(case.case(), &id, &opts).map_err(|e| e.to_string())?;
    if json {
        emit_json(out, &rep.to_json())?;
    } else {
        let mut text = format!("{} case {}\n", rep.id, rep.case.label());
        for (name, terms) in [("S1", &rep.s1), ("S2", &rep.s2)] {
            for t in terms {
                text.push_str(&format!("  {name}  {:<40} {:.6}\n", t.tag, t.value.f64()));
            }
        }
        for r in &rep.refinements {
            text.push_str(&format!("  refinement: {r}\n"));
        }
        for r in &rep.notes {
            text.push_str(&format!("  note: {r}\n"));
        }
        text.push_str(&format!("  total {:.6}  {}\n", rep.total().f64(), rep.verdict.label()));
        emit(out, &text)?;
    }
    Ok(if rep.verdict == Verdict::Certified { 0 } else { 1 })
}

fn scan(theorem: Theorem, tables: Option<&Path>, json: bool, out: &mut dyn Write) -> Res {
    let tables = load_tables(tables)?;
    let t = tables.as_ref();
    let (name, s): (&str, Scan) = match theorem {
        Theorem::SmallDim => ("small-dim", small_dim_scan(t)),
        Theorem::Nonsubspace => ("nonsubspace", nonsubspace_scan(t)),
        Theorem::Dagger => ("dagger", dagger_scan(t)),
    };
    if json {
        emit_json(
            out,
            &json!({
                "schema": 1,
                "theorem": name,
                "checked": s.checked,
                "flagged": s.flagged.iter().map(|e| e.to_json()).collect::<Vec<_>>(),
                "cutoffs": s.cutoffs.iter().map(|(f, n, q)| json!({"family": f.name(), "n": n, "q": q})).collect::<Vec<_>>(),
            }),
        )?;
    } else {
        let mut text = format!("{name}: {} flagged of {} checked\n", s.flagged.len(), s.checked);
        for e in &s.flagged {
            let a = e.a.map(|a| format!("{a:.3}")).unwrap_or_else(|| "-".into());
            let w = e.omega.map(|w| w.to_string()).unwrap_or_else(|| "-".into());
            text.push_str(&format!("  {:<16} a {a:>8}  omega {w:>3}  t {:.5}  {}\n", e.id.to_string(), e.t, e.reason));
        }
        emit(out, &text)?;
    }
    Ok(0)
}

fn need<T: Copy>(v: Option<T>, flag: &str) -> Result<T, String> {
    v.ok_or_else(|| format!("{flag} is required for this action type"))
}

fn build_action(cmd: &Command, json: bool, out: &mut dyn Write) -> Res {
    let Command::BuildAction {
        kind,
        m,
        k,
        r,
        base,
        gens,
        form,
        eps,
        n,
        q,
        part,
        count,
        seed,
        duality,
        cap,
        out: out_path,
        labels,
    } = cmd
    else {
        unreachable!()
    };
    let (group, label_text) = match kind {
        ActionType::Ksets => {
            let k = need(*k, "--k")?;
            let g = match base {
                Some(b) => load_group(b)?,
                None => PermGroup::symmetric(need(*m, "--m")?),
            };
            let (h, sets) = induced_on_ksets(&g, k, *cap).map_err(|e| e.to_string())?;
            let mut text = format!("# domain {k}-sets size {}\n", sets.len());
            for (i, s) in sets.iter().enumerate() {
                let pts: Vec<String> = s.iter().map(|x| (x + 1).to_string()).collect();
                text.push_str(&format!("{} {{{}}}\n", i + 1, pts.join(" ")));
            }
            (h, text)
        }
        ActionType::Product => {
            let b = base.as_ref().ok_or("--base is required for this action type")?;
            let h = product_action(&load_group(b)?, need(*r, "--r")?, *cap).map_err(|e| e.to_string())?;
            let text = format!("# domain product size {}\n", h.degree());
            (h, text)
        }
        _ => {
            let (fs, mut maps) = match gens {
                Some(path) => {
                    let file = parse_matrix_file(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))?;
                    let fs = file.form_space().map_err(|e| e.to_string())?;
                    (fs, file.gens)
                }
                None => {
                    let kind_name = match kind {
                        ActionType::Forms => "symplectic",
                        ActionType::PairsLe | ActionType::PairsPerp => form.as_deref().unwrap_or("trivial"),
                        _ => form.as_deref().ok_or("--form is required without --gens")?,
                    };
                    let fk = FormKind::parse(kind_name, eps.as_deref())
                        .ok_or_else(|| format!("unknown form {kind_name:?} (quadratic forms need --eps)"))?;
                    let fs = FormSpace::standard(fk, need(*n, "--n")?, need(*q, "--q")?).map_err(|e| e.to_string())?;
                    let maps = isometry_generators(&fs, *count, *seed).into_iter().map(SemilinearMap::linear).collect();
                    (fs, maps)
                }
            };
            if *duality {
                maps.push(SemilinearMap::duality(fs.n));
            }
            let dom = geometric_domain(*kind, &fs, eps.as_deref(), *k, *part, *cap)?;
            if dom.len() > *cap {
                return Err(format!("domain of size {} exceeds the cap {cap}", dom.len()));
            }
            let h = perm_image(&maps, &dom, &fs).map_err(|e| e.to_string())?;
            (h, dom.export_labels())
        }
    };
    std::fs::write(out_path, emit_group_file(&group)).map_err(|e| format!("{}: {e}", out_path.display()))?;
    let label_path = labels.clone().unwrap_or_else(|| {
        let mut p = out_path.clone().into_os_string();
        p.push(".labels");
        PathBuf::from(p)
    });
    std::fs::write(&label_path, label_text).map_err(|e| format!("{}: {e}", label_path.display()))?;
    if json {
        emit_json(
            out,
            &json!({
                "schema": 1,
                "degree": group.degree(),
                "generators": group.generators().len(),
                "out": out_path.display().to_string(),
                "labels": label_path.display().to_string(),
            }),
        )?;
    } else {
        emit(
            out,
            &format!(
                "degree {} with {} generators written to {}\n",
                group.degree(),
                group.generators().len(),
                out_path.display()
            ),
        )?;
    }
    Ok(0)
}

fn geometric_domain(
    kind: ActionType,
    fs: &FormSpace,
    eps: Option<&str>,
    k: Option<usize>,
    part: usize,
    cap: usize,
) -> Result<Domain, String> {
    let e = |x: crate::geometry::GeomError| x.to_string();
    Ok(match kind {
        ActionType::SingularPoints => singular_points(fs),
        ActionType::Ns1 => {
            let mut parts = nondegenerate_points(fs).map_err(e)?;
            if part >= parts.len() {
                return Err(format!("--part {part} out of range (there are {} orbits)", parts.len()));
            }
            parts.swap_remove(part)
        }
        ActionType::Aniso2 => anisotropic_2_subspaces(fs).map_err(e)?,
        ActionType::Maxts => maximal_totally_singular(fs, cap).map_err(e)?,
        ActionType::Forms => {
            let eps = eps.and_then(Eps::parse).filter(|&x| x != Eps::Circ).ok_or("--eps must be + or -")?;
            quadratic_forms_polarizing(fs, eps).map_err(e)?
        }
        ActionType::PairsLe | ActionType::PairsPerp => {
            let (le, perp) = pair_domains(fs.n, need(k, "--k")?, &fs.field).map_err(e)?;
            if kind == ActionType::PairsLe {
                le
            } else {
                perp
            }
        }
        ActionType::Ksets | ActionType::Product => unreachable!(),
    })
}

fn compare(
    group: Option<&Path>,
    a1: &Path,
    a2: &Path,
    samples: usize,
    seed: u64,
    json: bool,
    out: &mut dyn Write,
) -> Res {
    let (g1, g2) = (load_group(a1)?, load_group(a2)?);
    if let Some(p) = group {
        let g = load_group(p)?;
        for (name, h) in [("action1", &g1), ("action2", &g2)] {
            if h.generators().len() != g.generators().len() {
                return Err(format!(
                    "{name} has {} generators, the group file has {}",
                    h.generators().len(),
                    g.generators().len()
                ));
            }
        }
    }
    let rep = compare_actions_monotonic(&g1, &g2, samples, seed)?;
    let ok = rep.violations.is_empty();
    if json {
        emit_json(
            out,
            &json!({
                "schema": 1,
                "samples": rep.samples,
                "seed": seed,
                "degree1": g1.degree(),
                "degree2": g2.degree(),
                "violations": rep.violations.iter().map(|(w, c1, c2)| json!({"word": w, "count1": c1, "count2": c2})).collect::<Vec<_>>(),
            }),
        )?;
    } else {
        emit(
            out,
            &format!(
                "{} samples: {} violations of count(action1) <= count(action2)\n",
                rep.samples,
                rep.violations.len()
            ),
        )?;
    }
    Ok(if ok { 0 } else { 1 })
}
