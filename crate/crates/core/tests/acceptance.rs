//! Acceptance suite. Prints one line per criterion and exits nonzero if any fails.

use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use dgbkr::bkr_iso::verify_bkr;
use dgbkr::completion::completed_basis_check;
use dgbkr::hecke_core::{hecke_probes, random_word, verify_differential, verify_relations};
use dgbkr::homology::{build_filtration_complex, cross_oracle, cyclotomic_dim_hecke, default_cap, filtration_h0, verify_filtration, verify_tower, TowerSide};
use dgbkr::klr_core::{label_multisets, verify_d_lambda, verify_klr_relations_all};
use dgbkr::scalars_params::{build_quiver_degenerate, build_quiver_q, sc};
use dgbkr::{HeckeAlg, KlrAlg, ParamSet, Report, Variant};

struct Outcome {
    checks: usize,
    failures: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Outcome { checks: 0, failures: Vec::new() }
    }

    fn report(&mut self, r: &Report) {
        self.checks += r.checks.len();
        for c in r.failures() {
            self.failures.push(format!("{} [{:?}] {}", c.check_id, c.status, c.witness.clone().unwrap_or_default()));
        }
    }

    fn expect(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(what());
        }
    }
}

fn params(variant: Variant, q: Option<i64>, a: &[i64], big_q: &[i64], verts: &[i64]) -> ParamSet {
    ParamSet::ints(variant, q, big_q, a, verts).expect("valid parameters")
}

fn relation_suites() -> Outcome {
    let mut out = Outcome::new();
    for d in 2..=4 {
        out.report(&verify_relations(&HeckeAlg::degenerate(d), 3));
        out.report(&verify_relations(&HeckeAlg::q_deformed(d, sc(2)).unwrap(), 3));
    }
    let quivers = [build_quiver_degenerate(&[sc(0), sc(1), sc(2)]), build_quiver_q(&[sc(1), sc(2), sc(4)], &sc(2))];
    for quiver in &quivers {
        for n in 1..=4 {
            match verify_klr_relations_all(quiver, n, 3) {
                Ok(r) => out.report(&r),
                Err(e) => out.expect(false, || format!("KLR |ν| = {n}: {e}")),
            }
        }
    }
    out
}

fn differential_suites() -> Outcome {
    let mut out = Outcome::new();
    let sets = [
        params(Variant::Degenerate, None, &[0, 0], &[0], &[0, 1]),
        params(Variant::Degenerate, None, &[0, 0, 0], &[0, 1], &[0, 1]),
        params(Variant::Q, Some(2), &[1, 1], &[2], &[1, 2]),
        params(Variant::Q, Some(2), &[1, 1, 1], &[1, 2], &[1, 2]),
    ];
    for p in &sets {
        for d in 1..=3 {
            let alg = match p.variant {
                Variant::Degenerate => HeckeAlg::degenerate(d),
                Variant::Q => HeckeAlg::q_deformed(d, sc(2)).unwrap(),
            };
            out.report(&verify_differential(&alg, &p.big_q, 3, 5, d as u64));
        }
        let lam = p.lambda();
        let quiver = p.quiver();
        for n in 1..=3 {
            for labels in label_multisets(&quiver, n) {
                let alg = KlrAlg::new(quiver.clone(), labels).unwrap();
                out.report(&verify_d_lambda(&alg, &lam, 3));
            }
        }
    }
    out
}

fn round_trips() -> Outcome {
    let mut out = Outcome::new();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for variant in [Variant::Degenerate, Variant::Q] {
        for i in 0..200 {
            let d = 1 + i % 3;
            let alg = match variant {
                Variant::Degenerate => HeckeAlg::degenerate(d),
                Variant::Q => HeckeAlg::q_deformed(d, sc(2)).unwrap(),
            };
            let w = random_word(&mut rng, &alg, 6);
            let nf = alg.straighten(&w).unwrap();
            for p in hecke_probes(&alg, 2) {
                let lhs = alg.act(&w, &p).unwrap();
                let rhs = alg.act_element(&nf, &p).unwrap();
                if lhs != rhs {
                    out.expect(false, || format!("{variant} word {w} on {p}: {lhs} vs {rhs}"));
                    break;
                }
            }
            out.checks += 1;
        }
    }
    let quivers = [build_quiver_degenerate(&[sc(0), sc(1), sc(2)]), build_quiver_q(&[sc(1), sc(2), sc(4)], &sc(2))];
    for quiver in &quivers {
        let algs: Vec<KlrAlg> = (1..=3).flat_map(|n| label_multisets(quiver, n)).map(|l| KlrAlg::new(quiver.clone(), l).unwrap()).collect();
        for i in 0..50 {
            let alg = &algs[i % algs.len()];
            let k = alg.random_key(&mut rng, 2);
            let exp = alg.to_basis(&alg.basis_element(&k).unwrap(), None);
            out.expect(exp.as_ref().ok() == Some(&BTreeMap::from([(k.clone(), sc(1))])), || format!("to_basis(basis_element({k})) = {exp:?}"));
        }
        for alg in &algs {
            let blocks: BTreeSet<_> = alg
                .all_keys(2)
                .into_iter()
                .map(|k| {
                    let deg = alg.word_degree(&alg.basis_word(&k).unwrap());
                    (k.source.clone(), k.target(), k.omegas.count_ones() as usize, deg)
                })
                .collect();
            for (s, t, k, deg) in blocks {
                let ok = alg.operator_table(&s, &t, k, deg).map(|tab| tab.is_full_rank()).unwrap_or(false);
                out.expect(ok, || format!("operator table {s:?} → {t:?}, k = {k}, degree {deg} not of full rank"));
            }
        }
    }
    out
}

fn criterion4_sets() -> Vec<ParamSet> {
    vec![
        params(Variant::Degenerate, None, &[0, 1], &[0], &[0, 1]),
        params(Variant::Degenerate, None, &[0, 0, 1], &[0, 1], &[0, 1]),
        params(Variant::Q, Some(2), &[1, 2], &[1], &[1, 2]),
        params(Variant::Q, Some(2), &[1, 2, 4], &[2], &[1, 2, 4]),
    ]
}

fn bkr_suites() -> Outcome {
    let mut out = Outcome::new();
    for p in criterion4_sets() {
        for n in [3, 4] {
            let start = Instant::now();
            out.report(&verify_bkr(&p, n, 4, 11));
            println!("    bkr {} N={n}: {:.1}s", p.describe(), start.elapsed().as_secs_f64());
        }
    }
    out
}

fn quasi_iso() -> Outcome {
    let mut out = Outcome::new();
    let expected_h0: BTreeMap<(usize, usize), usize> = BTreeMap::from([((1, 1), 1), ((1, 2), 2), ((2, 1), 2), ((2, 2), 8)]);
    for (&(d, ell), &h0) in &expected_h0 {
        let zero = vec![0i64; ell];
        let shifted: Vec<i64> = if ell == 1 { vec![1] } else { vec![0, 1] };
        for big_q in [zero, shifted] {
            let p = params(Variant::Degenerate, None, &vec![big_q[0]; d], &big_q, &[0, 1]);
            let dlist: Vec<usize> = (1..=4).map(|k| 2 * k * ell).collect();
            out.report(&verify_filtration(&p, &dlist));
            let fc = build_filtration_complex(&p, 8 * ell).unwrap();
            let got = filtration_h0(&fc, 8 * ell);
            let oracle = cyclotomic_dim_hecke(&p, default_cap(&p)).unwrap().dim;
            out.expect(got == h0 && oracle == h0, || format!("(d,ℓ) = ({d},{ell}), Q = {big_q:?}: H⁰ {got}, oracle {oracle}, expected {h0}"));
        }
    }
    let q_sets = [
        params(Variant::Q, Some(2), &[2], &[2], &[1, 2]),
        params(Variant::Q, Some(2), &[2], &[2, 2], &[1, 2]),
        params(Variant::Q, Some(2), &[1, 2], &[1], &[1, 2]),
        params(Variant::Q, Some(2), &[1, 2], &[1, 2], &[1, 2]),
        params(Variant::Q, Some(2), &[1, 1], &[1], &[1, 2]),
    ];
    for p in &q_sets {
        out.report(&verify_tower(p, TowerSide::Hecke, &[2, 3, 4], p.ell()));
    }
    let klr_sets = [
        params(Variant::Degenerate, None, &[0], &[0, 0], &[0, 1]),
        params(Variant::Degenerate, None, &[0, 1], &[0], &[0, 1]),
        params(Variant::Degenerate, None, &[0, 1], &[0, 1], &[0, 1]),
        params(Variant::Degenerate, None, &[0, 0], &[0, 0], &[0, 1]),
        params(Variant::Q, Some(2), &[1, 2], &[1], &[1, 2]),
    ];
    for p in &klr_sets {
        out.report(&verify_tower(p, TowerSide::Klr, &[2, 3, 4], p.ell()));
    }
    out
}

fn completed_freeness() -> Outcome {
    let mut out = Outcome::new();
    let sets = [
        params(Variant::Degenerate, None, &[0], &[0], &[0, 1]),
        params(Variant::Degenerate, None, &[0, 1], &[0], &[0, 1]),
        params(Variant::Degenerate, None, &[0, 0], &[0], &[0, 1]),
        params(Variant::Q, Some(2), &[1], &[1], &[1, 2]),
        params(Variant::Q, Some(2), &[1, 2], &[1], &[1, 2]),
        params(Variant::Q, Some(2), &[2, 2], &[2], &[1, 2]),
    ];
    for p in &sets {
        for n in 1..=3 {
            out.report(&completed_basis_check(p, n));
        }
    }
    out
}

fn cross_oracles() -> Outcome {
    let mut out = Outcome::new();
    for p in criterion4_sets().into_iter().filter(|p| p.d <= 2) {
        out.report(&cross_oracle(&p));
    }
    let extra = [
        params(Variant::Degenerate, None, &[0, 1], &[0, 1], &[0, 1]),
        params(Variant::Degenerate, None, &[0, 0], &[0, 0], &[0, 1]),
        params(Variant::Q, Some(2), &[1, 2], &[1, 2], &[1, 2]),
        params(Variant::Q, Some(2), &[2, 2], &[2, 2], &[1, 2]),
    ];
    for p in &extra {
        out.report(&cross_oracle(p));
    }
    out
}

fn main() {
    // `cargo test` passes harness flags such as --nocapture; a filter argument selects criteria by number
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let criteria: [(usize, &str, f64, fn() -> Outcome); 7] = [
        (1, "relation suites", 120.0, relation_suites),
        (2, "differentials square to zero", 60.0, differential_suites),
        (3, "straightening and basis round trips", 180.0, round_trips),
        (4, "completed isomorphism", 1200.0, bkr_suites),
        (5, "quasi-isomorphism instances", 600.0, quasi_iso),
        (6, "completed basis freeness", 60.0, completed_freeness),
        (7, "cross-oracle consistency", 120.0, cross_oracles),
    ];
    let mut all_ok = true;
    for (n, name, budget, run) in criteria {
        if !filter.is_empty() && !filter.iter().any(|f| f == &n.to_string()) {
            continue;
        }
        let start = Instant::now();
        let out = run();
        let secs = start.elapsed().as_secs_f64();
        let ok = out.failures.is_empty();
        all_ok &= ok;
        let verdict = if ok { "PASS" } else { "FAIL" };
        let slow = if secs > budget { format!(" (over the {budget:.0}s budget)") } else { String::new() };
        println!("criterion {n} [{name}]: {verdict} ({} checks, exact, {secs:.1}s){slow}", out.checks);
        for f in out.failures.iter().take(5) {
            println!("    {f}");
        }
    }
    if !all_ok {
        std::process::exit(1);
    }
}
