//! Command-line front end.
//!
//! Exit codes: 0 success, 1 malformed input or unsupported request, 2 a failed check or
//! invariant violation, 3 K-theory that did not stabilize across the radius schedule.

use std::ffi::OsString;
use std::sync::Arc;

use clap::{Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::complexification::{complexified_submodule_count, ComplexifiedCount};
use crate::error::{Error, Result};
use crate::ktheory::{compute_ktheory, exactness_check, lattice_control, ExactnessReport, KTheoryResult, LatticeControl};
use crate::module::{detect_standard, wreath_submodule_scan, ModuleRef, StandardModule, StandardVerdict, TrivialModule, WreathScan};
use crate::ring::{format_combo, verify_based_ring_axioms, FusionRing, RingReport};
use crate::rings::LambdaReport;
use crate::spec::{construct_ring, construct_tilde, construct_wreath, parse_spec, GroupSpec};
use crate::torsion_enum::{enumerate_modules, module_from_matrix, Enumeration};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Parser, Debug)]
#[command(
    name = "fusion-torsion",
    version,
    about = "Fusion rings, torsion modules and K-theory of free wreath products",
    after_help = "GROUP SPECS: Z/k, F(n), SUq2, O+(n), U+(m), S1, A * B, wreath(G), tilde(G) or tilde(G; u).\n\
                  WORDS: space-separated letters; u<k> for SU_q(2), v<k> for O+(n), a, b^-1 for free groups,\n\
                  s or g^k for Z/k, z for S1, (x|y|..) for wreath words, 1 for the unit."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Write the report to a file instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<std::path::PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Based-ring axioms, plus the wreath embedding for wreath(..) specs.
    Verify {
        spec: String,
        #[arg(long, default_value_t = 5)]
        bound: usize,
    },
    /// Decompose the tensor product of two labels.
    Fusion { spec: String, left: String, right: String },
    /// Module enumeration, wreath submodule scans or complexification counts, depending on the group.
    Torsion {
        spec: String,
        #[arg(long, default_value_t = 4)]
        bound: usize,
        #[arg(long, default_value_t = 4)]
        max_rank: usize,
        #[arg(long, default_value_t = 3)]
        max_entry: u32,
    },
    /// K-groups of wreath(G) from the truncated boundary operator.
    Ktheory {
        spec: String,
        #[arg(long, value_delimiter = ',', default_value = "4,6,8")]
        radii: Vec<usize>,
    },
    /// Exactness of the free-group resolution on a window; `Z^2` runs the commuting control.
    Exactness {
        spec: String,
        #[arg(long, default_value_t = 5)]
        bound: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub spec: String,
    pub ring: RingReport,
    pub lambda: Option<LambdaReport>,
    /// For `tilde(..)`: labels not reached from powers of the generator.
    pub unreachable: Option<Vec<String>>,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FusionReport {
    pub spec: String,
    pub left: String,
    pub right: String,
    pub result: String,
    /// `(label, multiplicity)` in the ring's label order.
    pub terms: Vec<(String, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleVerdict {
    pub module: String,
    pub verdict: StandardVerdict,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorsionReport {
    pub spec: String,
    pub bound: usize,
    pub enumeration: Option<Enumeration>,
    pub verdicts: Vec<ModuleVerdict>,
    pub scans: Vec<WreathScan>,
    pub complexified: Vec<ComplexifiedCount>,
    /// Non-standard submodules of the complexification up to isomorphism, over all inputs.
    pub nontrivial_classes: Option<usize>,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ExactnessOutcome {
    Resolution(ExactnessReport),
    Control(LatticeControl),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "command", content = "report", rename_all = "snake_case")]
pub enum Report {
    Verify(VerifyReport),
    Fusion(FusionReport),
    Torsion(TorsionReport),
    Ktheory(KTheoryResult),
    Exactness(ExactnessOutcome),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Output {
    pub schema_version: u32,
    #[serde(flatten)]
    pub report: Report,
}

impl Report {
    pub fn exit_code(&self) -> i32 {
        match self {
            Report::Verify(r) if !r.passed => 2,
            Report::Torsion(r) if !r.passed => 2,
            Report::Exactness(ExactnessOutcome::Resolution(r)) if !r.passed => 2,
            Report::Exactness(ExactnessOutcome::Control(c)) if !c.relation_holds => 2,
            Report::Ktheory(k) if !k.stable => 3,
            _ => 0,
        }
    }
}

pub fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::Invariant(_) => 2,
        _ => 1,
    }
}

fn verify(text: &str, bound: usize) -> Result<VerifyReport> {
    let spec = parse_spec(text)?;
    let ring = construct_ring(&spec)?;
    let ring_report = verify_based_ring_axioms(ring.as_ref(), bound)?;
    let lambda = match &spec {
        GroupSpec::Wreath(base) => Some(construct_wreath(base)?.check_lambda(bound)?),
        _ => None,
    };
    let unreachable = match &spec {
        GroupSpec::Tilde(base, u) => {
            let t = construct_tilde(base, u.as_deref())?;
            Some(t.unreachable_labels(bound)?.iter().map(|l| t.format(l)).collect())
        }
        _ => None,
    };
    let passed = ring_report.passed && lambda.as_ref().is_none_or(|l| l.passed);
    Ok(VerifyReport { spec: spec.to_string(), ring: ring_report, lambda, unreachable, passed })
}

fn fusion(text: &str, left: &str, right: &str) -> Result<FusionReport> {
    let spec = parse_spec(text)?;
    let ring = construct_ring(&spec)?;
    let (a, b) = (ring.parse(left)?, ring.parse(right)?);
    let x = ring.tensor(&a, &b)?;
    Ok(FusionReport {
        spec: spec.to_string(),
        left: ring.format(&a),
        right: ring.format(&b),
        result: format_combo(ring.as_ref(), &x),
        terms: x.iter().map(|(l, c)| (ring.format(l), c.to_string())).collect(),
    })
}

/// Input modules of `G`: the enumerated connected modules when `G` is finite, otherwise the
/// trivial and standard modules.
fn base_modules(base: &GroupSpec, max_rank: usize, max_entry: u32) -> Result<(Option<Enumeration>, Vec<ModuleRef>)> {
    let ring = construct_ring(base)?;
    if ring.is_finite() {
        let e = enumerate_modules(&ring, max_rank, max_entry)?;
        let mut mods: Vec<ModuleRef> = Vec::new();
        for c in &e.modules {
            let (g, m) = c.matrices.iter().next().ok_or_else(|| Error::Invariant("empty candidate".into()))?;
            mods.push(Arc::new(module_from_matrix(&ring, &ring.parse(g)?, m, format!("rank-{} module of {}", c.rank, ring.name()))?));
        }
        Ok((Some(e), mods))
    } else {
        Ok((None, vec![Arc::new(TrivialModule::new(ring.clone())), Arc::new(StandardModule::new(ring))]))
    }
}

fn torsion(text: &str, bound: usize, max_rank: usize, max_entry: u32) -> Result<TorsionReport> {
    let spec = parse_spec(text)?;
    let mut rep = TorsionReport {
        spec: spec.to_string(),
        bound,
        enumeration: None,
        verdicts: Vec::new(),
        scans: Vec::new(),
        complexified: Vec::new(),
        nontrivial_classes: None,
        passed: true,
    };
    match &spec {
        GroupSpec::Wreath(base) => {
            let (e, mods) = base_modules(base, max_rank, max_entry)?;
            rep.enumeration = e;
            for n in mods {
                let (_, scan) = wreath_submodule_scan(n, bound)?;
                rep.passed &= scan.passed;
                rep.scans.push(scan);
            }
        }
        GroupSpec::Tilde(inner, u) => {
            let tilde = construct_tilde(inner, u.as_deref())?;
            let fundamental = tilde.even_part().fundamental().clone();
            let inputs: Vec<ModuleRef> = match &**inner {
                GroupSpec::Wreath(base) => {
                    let (e, mods) = base_modules(base, max_rank, max_entry)?;
                    rep.enumeration = e;
                    let mut subs: Vec<ModuleRef> = Vec::new();
                    for n in mods {
                        let (sub, scan) = wreath_submodule_scan(n, bound)?;
                        rep.passed &= scan.passed;
                        rep.scans.push(scan);
                        subs.push(sub);
                    }
                    subs
                }
                other => {
                    let (e, mods) = base_modules(other, max_rank, max_entry)?;
                    rep.enumeration = e;
                    let mut ns = Vec::new();
                    for m in mods {
                        if detect_standard(m.as_ref(), bound)?.is_non_standard() {
                            ns.push(m);
                        }
                    }
                    ns
                }
            };
            let mut total = 0;
            for n in inputs {
                let c = complexified_submodule_count(n, fundamental.clone(), bound.min(3))?;
                total += match &c.iso_between {
                    Some(v) if v.is_yes() => 1,
                    _ => c.count,
                };
                rep.complexified.push(c);
            }
            rep.nontrivial_classes = Some(total);
        }
        other => {
            let ring = construct_ring(other)?;
            if !ring.is_finite() {
                return Err(Error::Unsupported(format!(
                    "torsion needs a finite ring, wreath(..) or tilde(..); got {other}"
                )));
            }
            let (e, mods) = base_modules(other, max_rank, max_entry)?;
            if let Some(e) = &e {
                rep.passed &= e.modules.iter().all(|c| c.axioms_passed);
            }
            rep.enumeration = e;
            for m in mods {
                rep.verdicts.push(ModuleVerdict { module: m.name(), verdict: detect_standard(m.as_ref(), bound)? });
            }
        }
    }
    Ok(rep)
}

fn exactness(text: &str, bound: usize) -> Result<ExactnessOutcome> {
    if text.replace(' ', "") == "Z^2" {
        return Ok(ExactnessOutcome::Control(lattice_control(bound)?));
    }
    Ok(ExactnessOutcome::Resolution(exactness_check(&parse_spec(text)?, bound)?))
}

pub fn execute(cmd: &Command) -> Result<Report> {
    Ok(match cmd {
        Command::Verify { spec, bound } => Report::Verify(verify(spec, *bound)?),
        Command::Fusion { spec, left, right } => Report::Fusion(fusion(spec, left, right)?),
        Command::Torsion { spec, bound, max_rank, max_entry } => {
            Report::Torsion(torsion(spec, *bound, *max_rank, *max_entry)?)
        }
        Command::Ktheory { spec, radii } => Report::Ktheory(compute_ktheory(&parse_spec(spec)?, radii)?),
        Command::Exactness { spec, bound } => Report::Exactness(exactness(spec, *bound)?),
    })
}

fn yes(b: bool) -> &'static str {
    if b {
        "pass"
    } else {
        "FAIL"
    }
}

fn verdict_text(v: &StandardVerdict) -> String {
    match v {
        StandardVerdict::Standard { witness } => format!("standard (witness {witness})"),
        StandardVerdict::NonStandard { element, stabilizer } => format!("non-standard ({stabilizer} stabilizes {element})"),
        StandardVerdict::Unknown { reason } => format!("unknown ({reason})"),
    }
}

fn group_text(rank: usize, torsion: &[num_bigint::BigInt]) -> String {
    let mut parts: Vec<String> = Vec::new();
    match rank {
        0 => {}
        1 => parts.push("Z".into()),
        r => parts.push(format!("Z^{r}")),
    }
    parts.extend(torsion.iter().map(|t| format!("Z/{t}")));
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

pub fn render_text(report: &Report) -> String {
    let mut s = String::new();
    let mut line = |l: String| {
        s.push_str(&l);
        s.push('\n');
    };
    match report {
        Report::Verify(r) => {
            line(format!("{}: based-ring axioms up to degree {}: {}", r.spec, r.ring.bound, yes(r.ring.passed)));
            line(format!("  labels {}, pairs {}, triples {}{}", r.ring.labels_checked, r.ring.pairs_checked, r.ring.triples_checked, if r.ring.sampled { " (sampled)" } else { "" }));
            if let Some(v) = &r.ring.violation {
                line(format!("  violation: {v}"));
            }
            if let Some(l) = &r.lambda {
                line(format!("  wreath embedding is a homomorphism on {} pairs: {}", l.pairs_checked, yes(l.passed)));
                if let Some(v) = &l.violation {
                    line(format!("  violation: {v}"));
                }
            }
            match r.unreachable.as_deref() {
                Some([]) => line("  every label is reached from powers of the generator".into()),
                Some(u) => line(format!("  not reached from powers of the generator: {}", u.join(", "))),
                None => {}
            }
        }
        Report::Fusion(f) => line(f.result.clone()),
        Report::Torsion(t) => {
            line(format!("{} (window degree {})", t.spec, t.bound));
            if let Some(e) = &t.enumeration {
                line(format!("  {} connected modules of rank <= {} over {} ({} search nodes)", e.modules.len(), e.max_rank, e.ring, e.nodes));
                for c in &e.modules {
                    line(format!("    rank {}: {} = {:?}, stabilizer orders {:?}", c.rank, e.generator, c.matrices.values().next().unwrap_or(&vec![]), c.stabilizer_orders));
                }
            }
            for v in &t.verdicts {
                line(format!("  {}: {}", v.module, verdict_text(&v.verdict)));
            }
            for w in &t.scans {
                line(format!("  wreath scan of {}: {}", w.input, yes(w.passed)));
                line(format!("    submodule generated by {}: {}", w.seeds[0], verdict_text(&w.verdict)));
                line(format!("    u2 stabilizes {}: {}; same submodule for every j: {}", w.seeds.join(", "), w.u2_stabilizes, w.independent));
                line(format!("    other orbits: {} standard of {}; non-standard submodules: {}", w.other_standard, w.other_orbits, w.non_standard_submodules));
            }
            for c in &t.complexified {
                let iso = match &c.iso_between {
                    Some(v) if v.is_yes() => ", P and P' isomorphic",
                    Some(_) => ", P and P' not shown isomorphic",
                    None => "",
                };
                line(format!("  {} in {}: {} submodule(s){iso}", c.module, c.ring, c.count));
            }
            if let Some(n) = t.nontrivial_classes {
                line(format!("  non-trivial classes: {n}"));
            }
        }
        Report::Ktheory(k) => {
            line(format!("{} at radii {:?}", k.spec, k.radii));
            line(format!("  K0 = {}", group_text(k.k0.rank, &k.k0.torsion)));
            line(format!("  K1 = {}", group_text(k.k1.rank, &[])));
            line(format!("  methods: {}; stable: {}", k.methods.join(", "), k.stable));
            if let Some(why) = &k.instability {
                line(format!("  instability: {why}"));
            }
            line(format!("  kernel basis: {}", k.witnesses.kernel_basis.join("; ")));
            for t in &k.trace {
                line(format!("  R={}: {}x{} -> K1 rank {}, K0 {} ({} ms)", t.radius, t.codomain_dim, t.domain_dim, t.k1_rank, group_text(t.k0_snf.free_rank, &t.k0_snf.torsion), t.millis));
            }
        }
        Report::Exactness(ExactnessOutcome::Resolution(r)) => {
            line(format!("{} at radius {}: {}", r.spec, r.radius, yes(r.passed)));
            line(format!("  eps o d = 0: {}; d injective: {} (kernel rank {}); interior homology zero on {} elements: {}", r.epsilon_d_zero, r.injective, r.kernel_rank, r.interior_checked, r.interior_homology_zero));
            for f in &r.failures {
                line(format!("  failure: {f}"));
            }
        }
        Report::Exactness(ExactnessOutcome::Control(c)) => {
            line(format!("Z^2 control at radius {}: relation {} holds: {}", c.report.radius, c.relation, c.relation_holds));
            line(format!("  kernel rank {}", c.kernel_rank));
        }
    }
    s
}

pub fn render_json(report: &Report) -> String {
    let out = Output { schema_version: SCHEMA_VERSION, report: report.clone() };
    serde_json::to_string_pretty(&out).expect("reports serialize")
}

/// Parses `args`, runs the command and writes the report; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let report = match execute(&cli.command) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_code_for(&e);
        }
    };
    let text = if cli.json { render_json(&report) } else { render_text(&report) };
    match &cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, format!("{}\n", text.trim_end())) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return 1;
            }
        }
        None => {
            use std::io::Write;
            // a closed pipe (e.g. `| head`) is not an error for a report writer
            let _ = writeln!(std::io::stdout(), "{}", text.trim_end());
        }
    }
    report.exit_code()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cmd(args: &[&str]) -> Command {
        let mut v = vec!["fusion-torsion"];
        v.extend_from_slice(args);
        Cli::try_parse_from(v).unwrap().command
    }

    #[test]
    fn fusion_command() {
        let Report::Fusion(f) = execute(&cmd(&["fusion", "Z/2 * SUq2", "s u1", "u1 s"])).unwrap() else { panic!() };
        assert_eq!(f.result, "s u2 s + 1");
    }

    #[test]
    fn json_round_trip() {
        for args in [
            vec!["verify", "wreath(Z/2)", "--bound", "3"],
            vec!["fusion", "SUq2", "u1", "u2"],
            vec!["torsion", "Z/4"],
            vec!["torsion", "wreath(Z/2)", "--bound", "3"],
            vec!["exactness", "F(1)", "--bound", "3"],
            vec!["exactness", "Z^2", "--bound", "3"],
            vec!["ktheory", "wreath(O+(3))", "--radii", "3,4,5"],
        ] {
            let r = execute(&cmd(&args)).unwrap();
            let text = render_json(&r);
            let back: Output = serde_json::from_str(&text).unwrap();
            assert_eq!(back.schema_version, SCHEMA_VERSION);
            assert_eq!(back.report, r, "{args:?}");
            assert_eq!(r.exit_code(), 0, "{args:?}");
        }
    }

    #[test]
    fn exit_codes() {
        assert_eq!(run(["fusion-torsion", "verify", "Z/"]), 1);
        assert_eq!(run(["fusion-torsion", "nonsense"]), 1);
        assert_eq!(run(["fusion-torsion", "ktheory", "wreath(O+(3))", "--radii", "4,3,5"]), 1);
        assert_eq!(exit_code_for(&Error::Invariant("x".into())), 2);
    }

    #[test]
    fn parse_errors_carry_positions() {
        let Err(Error::Parse { pos, .. }) = execute(&cmd(&["verify", "Z/2 * "])) else { panic!() };
        assert_eq!(pos, 6);
    }
}
