//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fails.

use std::sync::Arc;
use std::time::Instant;

use num_bigint::BigInt;

use fusion_torsion::complexification::{complexified_submodule_count, even_class_trichotomy, EvenPart};
use fusion_torsion::ktheory::{
    compute_ktheory, exactness_check, image_lattice_fundamental, image_lattice_u, lattice_control, KTheoryResult,
    OrbitClass, WreathModel,
};
use fusion_torsion::module::{
    check_module_axioms, check_pairing_equivariance, wreath_submodule_scan, BasedModule, FiniteModule, ModuleRef, StandardModule,
    TrivialModule,
};
use fusion_torsion::ring::verify_based_ring_axioms;
use fusion_torsion::rings::CyclicRing;
use fusion_torsion::spec::construct_wreath;
use fusion_torsion::torsion_enum::{enumerate_modules, module_from_matrix};
use fusion_torsion::{construct_ring, parse_spec, FusionRing, GroupSpec, Label, RingRef};

type Outcome = Result<String, String>;
type Criterion = fn() -> Outcome;

fn check(cond: bool, ok: impl Into<String>, bad: impl Into<String>) -> Outcome {
    if cond {
        Ok(ok.into())
    } else {
        Err(bad.into())
    }
}

fn kt(spec: &str, radii: &[usize]) -> Result<KTheoryResult, String> {
    compute_ktheory(&parse_spec(spec).map_err(|e| e.to_string())?, radii).map_err(|e| format!("{spec}: {e}"))
}

fn z_plus_z2(k: &KTheoryResult) -> bool {
    k.k0.rank == 1 && k.k0.torsion == vec![BigInt::from(2)]
}

fn describe(k: &KTheoryResult) -> String {
    format!("{}: K0 rank {} torsion {:?}, K1 rank {}, stable {}", k.spec, k.k0.rank, k.k0.torsion, k.k1.rank, k.stable)
}

fn orthogonal_wreaths() -> Outcome {
    let mut notes = Vec::new();
    for n in [2, 3, 5] {
        let start = Instant::now();
        let k = kt(&format!("wreath(O+({n}))"), &[4, 6, 8])?;
        let secs = start.elapsed().as_secs_f64();
        let both = k.methods.len() == 2;
        if !(z_plus_z2(&k) && k.k1.rank == 2 && k.stable && both && secs < 60.0) {
            return Err(format!("{} methods {:?} in {secs:.2} s", describe(&k), k.methods));
        }
        notes.push(format!("n={n} {secs:.2} s"));
    }
    Ok(format!("wreath(O+(n)), n = 2, 3, 5 at radii 4,6,8: K0 = Z + Z/2, K1 = Z^2, Smith form and rewriting agree ({})", notes.join(", ")))
}

fn free_products() -> Outcome {
    let a = kt("wreath(U+(2) * O+(3))", &[3, 4, 5])?;
    let b = kt("wreath(U+(2))", &[3, 4, 5])?;
    check(
        z_plus_z2(&a) && a.k1.rank == 4 && a.stable && z_plus_z2(&b) && b.k1.rank == 3 && b.stable,
        "wreath(U+(2) * O+(3)): K1 = Z^4, K0 = Z + Z/2; wreath(U+(2)): K1 = Z^3 (radii 3,4,5)",
        format!("{}; {}", describe(&a), describe(&b)),
    )
}

fn free_groups() -> Outcome {
    let mut notes = Vec::new();
    for (n, radii) in [(1, vec![4, 6, 8]), (2, vec![4, 5, 6]), (3, vec![3, 4, 5])] {
        let k = kt(&format!("wreath(F({n}))"), &radii)?;
        if !(z_plus_z2(&k) && k.k1.rank == n + 1 && k.stable) {
            return Err(describe(&k));
        }
        notes.push(format!("F({n}) at {radii:?}: K1 = Z^{}", n + 1));
    }
    Ok(format!("{}; K0 = Z + Z/2 throughout", notes.join(", ")))
}

fn kernel_lemma() -> Outcome {
    let radii: Vec<usize> = (2..=9).collect();
    let k = kt("wreath(O+(3))", &radii)?;
    let bad: Vec<usize> = k.trace.iter().filter(|t| !t.kernel_is_canonical || t.k1_rank != 2).map(|t| t.radius).collect();
    check(
        bad.is_empty(),
        format!("wreath(O+(3)) kernel is span{{e_∅ + e_u, f_u}} at radii 2..=9 ({})", k.witnesses.kernel_basis.join("; ")),
        format!("kernel differs at radii {bad:?}"),
    )
}

fn image_lattices() -> Outcome {
    let model = WreathModel::new(&parse_spec("wreath(O+(3))").unwrap()).map_err(|e| e.to_string())?;
    let len = 8;
    let mut checked = 0;
    for w in ["v1", "v2", "v1 u1 v1", "v3 u2 v1"] {
        let c = OrbitClass::Word(model.ambient.parse(w).map_err(|e| e.to_string())?);
        let l = image_lattice_u(&model, &c, len).map_err(|e| format!("d_u at {w}: {e}"))?;
        if !l.matches {
            return Err(format!("d_u at {w}: observed {:?}, expected {:?}", l.observed, l.expected));
        }
        checked += 1;
    }
    let mut last = Vec::new();
    for w in [None, Some("v1 u1"), Some("v2 u3"), Some("v1 u2 v1 u1")] {
        let c = match w {
            None => OrbitClass::Empty,
            Some(w) => OrbitClass::Word(model.ambient.parse(w).map_err(|e| e.to_string())?),
        };
        let l = image_lattice_fundamental(&model, 0, &c, len).map_err(|e| format!("d_v at {w:?}: {e}"))?;
        if !l.matches {
            return Err(format!("d_v at {w:?}: observed {:?}, expected {:?}", l.observed, l.expected));
        }
        last = l.observed;
        checked += 1;
    }
    let b: Vec<String> = last.iter().take(5).map(|x| x.to_string()).collect();
    Ok(format!("{checked} chains of length {len} reduce to e_(k+1) - a_k e_0 with a = 2,3,4,... and b = {},...", b.join(",")))
}

fn exactness_windows() -> Outcome {
    let mut notes = Vec::new();
    for n in [1, 2] {
        let spec = parse_spec(&format!("F({n})")).unwrap();
        let r = exactness_check(&spec, 5).map_err(|e| e.to_string())?;
        if !(r.passed && r.epsilon_d_zero && r.injective && r.interior_homology_zero) {
            return Err(format!("F({n}): {:?}", r.failures));
        }
        notes.push(format!("F({n}) {} interior elements", r.interior_checked));
    }
    let c = lattice_control(5).map_err(|e| e.to_string())?;
    check(
        c.relation_holds && c.kernel_rank > 0,
        format!("radius 5: {}; Z^2 control: {} (kernel rank {})", notes.join(", "), c.relation, c.kernel_rank),
        format!("Z^2 control relation missing: {c:?}"),
    )
}

fn torsion_oracles() -> Outcome {
    let z2: RingRef = Arc::new(CyclicRing::new(2).unwrap());
    let e = enumerate_modules(&z2, 4, 3).map_err(|e| e.to_string())?;
    if e.modules.len() != 2 || !e.modules.iter().all(|c| c.axioms_passed) {
        return Err(format!("Z/2 up to rank 4: {} classes", e.modules.len()));
    }
    let m = FiniteModule::two_class_z4();
    let r = m.ring();
    let ax = check_module_axioms(&m, 4).map_err(|e| e.to_string())?;
    let even = EvenPart::from_summands(r.clone(), vec![r.parse("g").unwrap(), r.parse("g^3").unwrap()]).map_err(|e| e.to_string())?;
    let t = even_class_trichotomy(&m, &even, 4).map_err(|e| e.to_string())?;
    if !(ax.passed && t.classes == 2 && !t.odd_stabilizer_found) {
        return Err(format!("Z/4 two-class module: axioms {}, classes {}, odd stabilizer {}", ax.passed, t.classes, t.odd_stabilizer_found));
    }
    let u2 = Label::Wreath(vec![z2.unit()]);
    for c in &e.modules {
        let (g, mat) = c.matrices.iter().next().unwrap();
        let n: ModuleRef = Arc::new(module_from_matrix(&z2, &z2.parse(g).unwrap(), mat, format!("rank {}", c.rank)).unwrap());
        let (sub, scan) = wreath_submodule_scan(n, 4).map_err(|e| e.to_string())?;
        let witness = sub.seeds().iter().all(|s| sub.act(&u2, s).map(|x| x.contains(s)).unwrap_or(false));
        if !(scan.passed && scan.non_standard_submodules == 1 && scan.u2_stabilizes && witness) {
            return Err(format!("wreath scan of rank-{} module: {scan:?}", c.rank));
        }
    }
    Ok("Z/2 up to rank 4: 2 classes; Z/4 two-class module: axioms pass, 2 classes, no odd stabilizer; wreath(Z/2) scan: one non-standard submodule per input, u2 stabilizes u1 j".into())
}

fn complexification_counts() -> Outcome {
    let z2: RingRef = Arc::new(CyclicRing::new(2).unwrap());
    let wreath = construct_wreath(&GroupSpec::Cyclic(2)).map_err(|e| e.to_string())?;
    let u = wreath.parse("(s)").map_err(|e| e.to_string())?;
    let (trivial, _) = wreath_submodule_scan(Arc::new(TrivialModule::new(z2.clone())), 4).map_err(|e| e.to_string())?;
    let (swap, _) = wreath_submodule_scan(Arc::new(FiniteModule::swap()), 4).map_err(|e| e.to_string())?;
    let a = complexified_submodule_count(trivial, u.clone(), 3).map_err(|e| e.to_string())?;
    let b = complexified_submodule_count(swap, u, 3).map_err(|e| e.to_string())?;
    let iso = b.iso_between.as_ref().is_some_and(|v| v.is_yes());
    let total = a.count + if iso { 1 } else { b.count };
    check(
        a.count == 1 && b.count == 2 && iso && total == 2,
        "trivial input: 1 submodule; swap input: 2 submodules, P ≅ P'; non-trivial classes in total: 2",
        format!("counts {} and {} (iso {iso}), total {total}", a.count, b.count),
    )
}

const CATALOG: &[&str] = &[
    "Z/2",
    "Z/3",
    "F(1)",
    "F(2)",
    "SUq2",
    "O+(3)",
    "U+(2)",
    "S1",
    "Z/2 * SUq2",
    "O+(3) * U+(2)",
    "wreath(Z/2)",
    "wreath(F(1))",
    "wreath(O+(3))",
    "tilde(O+(3))",
    "tilde(wreath(Z/2))",
];

fn property_suites() -> Outcome {
    let bound = 5;
    let mut times = [0.0f64; 4];
    for text in CATALOG {
        let spec = parse_spec(text).map_err(|e| e.to_string())?;
        let ring = construct_ring(&spec).map_err(|e| e.to_string())?;

        let t = Instant::now();
        let r = verify_based_ring_axioms(ring.as_ref(), bound).map_err(|e| e.to_string())?;
        times[0] += t.elapsed().as_secs_f64();
        if !r.passed {
            return Err(format!("{text}: ring axioms: {:?}", r.violation));
        }

        let t = Instant::now();
        for m in [Arc::new(StandardModule::new(ring.clone())) as ModuleRef, Arc::new(TrivialModule::new(ring.clone()))] {
            let r = check_module_axioms(m.as_ref(), bound).map_err(|e| e.to_string())?;
            if !r.passed {
                return Err(format!("{text}: {}: {:?}", m.name(), r.violation));
            }
        }
        times[1] += t.elapsed().as_secs_f64();

        let t = Instant::now();
        let p = check_pairing_equivariance(&StandardModule::new(ring.clone()), bound, 6).map_err(|e| e.to_string())?;
        times[2] += t.elapsed().as_secs_f64();
        if !p.passed {
            return Err(format!("{text}: pairing: {:?}", p.violation));
        }

        if let GroupSpec::Wreath(base) = &spec {
            let t = Instant::now();
            let l = construct_wreath(base).and_then(|w| w.check_lambda(bound)).map_err(|e| e.to_string())?;
            times[3] += t.elapsed().as_secs_f64();
            if !l.passed {
                return Err(format!("{text}: wreath embedding: {:?}", l.violation));
            }
        }
    }
    let slow = times.iter().any(|t| *t >= 30.0);
    check(
        !slow,
        format!(
            "{} specs at degree 5: ring {:.1} s, modules {:.1} s, pairing {:.1} s, wreath embedding {:.1} s",
            CATALOG.len(),
            times[0],
            times[1],
            times[2],
            times[3]
        ),
        format!("a suite exceeded 30 s: {times:?}"),
    )
}

fn main() {
    let criteria: [(&str, Criterion); 9] = [
        ("K-theory of wreath(O+(n))", orthogonal_wreaths),
        ("free products", free_products),
        ("free groups", free_groups),
        ("kernel of the boundary map", kernel_lemma),
        ("image lattices", image_lattices),
        ("exactness windows", exactness_windows),
        ("torsion classification", torsion_oracles),
        ("complexification counts", complexification_counts),
        ("property suites", property_suites),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(msg) => println!("criterion {}: PASS  {name} [{secs:.2} s]: {msg}", i + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {}: FAIL  {name} [{secs:.2} s]: {msg}", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
