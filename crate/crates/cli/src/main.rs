use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use dgbkr::bkr_iso::verify_bkr;
use dgbkr::hecke_core::{verify_differential, verify_relations};
use dgbkr::homology::{
    build_filtration_complex, build_quotient_complex, cross_oracle, cyclotomic_dim_hecke, default_cap, filtration_h0, homology_ranks, klr_cap,
    verify_filtration, verify_tower, TowerSide,
};
use dgbkr::klr_core::{label_multisets, verify_d_lambda, verify_klr_relations_all};
use dgbkr::scalars_params::{parse_scalar, parse_scalar_list, sc};
use dgbkr::{Error, HeckeAlg, KlrAlg, ParamSet, Report, Status, Variant};

#[derive(Parser)]
#[command(name = "dgbkr", version, about = "Verification suites for DG affine Hecke and KLR algebras")]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Defining relations of the Hecke and KLR algebras, checked on their polynomial representations
    VerifyRelations {
        #[command(flatten)]
        p: ParamArgs,
        #[arg(long, default_value_t = 3)]
        max_deg: usize,
    },
    /// ∂_Q² = 0, d_Λ² = 0 and compatibility of ∂_P with the relations
    VerifyDifferential {
        #[command(flatten)]
        p: ParamArgs,
        #[arg(long, default_value_t = 3)]
        max_deg: usize,
        /// number of random P for the relation-compatibility check
        #[arg(long, default_value_t = 5)]
        random_p: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// The completed isomorphism, at truncation order N
    VerifyBkr {
        #[command(flatten)]
        p: ParamArgs,
        #[arg(long)]
        trunc: usize,
        #[arg(long, default_value_t = 4)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Homology of the DG algebra against the cyclotomic quotient
    Homology {
        #[command(flatten)]
        p: ParamArgs,
        #[arg(long, value_enum)]
        route: Route,
        #[arg(long, value_enum, default_value_t = Side::Hecke)]
        side: Side,
        #[arg(long = "Dmax", default_value_t = 8)]
        dmax: usize,
        #[arg(long = "Nmax", default_value_t = 4)]
        nmax: usize,
    },
    /// Cyclotomic dimensions on both sides
    Dims {
        #[command(flatten)]
        p: ParamArgs,
        #[arg(long)]
        cap: Option<usize>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Route {
    Filtration,
    Tower,
}

#[derive(Clone, Copy, ValueEnum)]
enum Side {
    Hecke,
    Klr,
}

#[derive(Args)]
struct ParamArgs {
    #[arg(long)]
    variant: String,
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    q: Option<String>,
    #[arg(long)]
    a: Option<String>,
    #[arg(long = "Q")]
    big_q: Option<String>,
    #[arg(long = "I")]
    vertices: Option<String>,
    /// also write the JSON report here
    #[arg(long)]
    out: Option<std::path::PathBuf>,
}

impl ParamArgs {
    /// Missing a, Q, I are filled from whatever is given: Q defaults to the first vertex,
    /// a to d copies of Q₁, and I to the labels occurring in a and Q.
    fn resolve(&self) -> Result<ParamSet, Error> {
        let variant: Variant = self.variant.parse()?;
        let q = self.q.as_deref().map(parse_scalar).transpose()?;
        if variant == Variant::Q && q.is_none() {
            return Err(Error::InvalidParam("--q is required for the q variant".into()));
        }
        let list = |s: &Option<String>| s.as_deref().map(parse_scalar_list).transpose();
        let (a, big_q, verts) = (list(&self.a)?, list(&self.big_q)?, list(&self.vertices)?);
        let first = verts
            .as_ref()
            .and_then(|v| v.first().cloned())
            .or_else(|| a.as_ref().and_then(|v| v.first().cloned()))
            .unwrap_or_else(|| match variant {
                Variant::Degenerate => sc(0),
                Variant::Q => sc(1),
            });
        let big_q = big_q.unwrap_or_else(|| vec![first.clone()]);
        let a = match (a, self.d) {
            (Some(a), Some(d)) if a.len() != d => return Err(Error::InvalidParam(format!("--a has {} entries but --d is {d}", a.len()))),
            (Some(a), _) => a,
            (None, Some(d)) => vec![big_q[0].clone(); d],
            (None, None) => return Err(Error::InvalidParam("one of --d, --a is required".into())),
        };
        let verts = verts.unwrap_or_else(|| a.iter().chain(big_q.iter()).cloned().collect());
        ParamSet::new(variant, q, big_q, a, verts)
    }
}

fn relations(p: &ParamSet, max_deg: usize) -> Report {
    let mut r = verify_relations(&HeckeAlg::from_params(p), max_deg);
    match verify_klr_relations_all(&p.quiver(), p.d, max_deg) {
        Ok(k) => r.extend(k),
        Err(e) => r.push(dgbkr::CheckRecord::error("klr.relations", e.to_string())),
    }
    r
}

fn differential(p: &ParamSet, max_deg: usize, random_p: usize, seed: u64) -> Report {
    let mut r = verify_differential(&HeckeAlg::from_params(p), &p.big_q, max_deg, random_p, seed);
    let lam = p.lambda();
    for labels in label_multisets(&p.quiver(), p.d) {
        match KlrAlg::new(p.quiver(), labels) {
            Ok(alg) => r.extend(verify_d_lambda(&alg, &lam, max_deg)),
            Err(e) => r.push(dgbkr::CheckRecord::error("klr.dlambda", e.to_string())),
        }
    }
    r
}

/// Runs the homology route and returns the report with dim H⁰ at the top bound.
fn homology(p: &ParamSet, route: Route, side: Side, dmax: usize, nmax: usize) -> (Report, Value) {
    match route {
        Route::Filtration => {
            if p.variant != Variant::Degenerate {
                let rec = dgbkr::CheckRecord::error("homology.filtration", "the filtration route needs the degenerate variant");
                return (Report::from_records(vec![rec]), Value::Null);
            }
            let step = 2 * p.ell();
            let mut dlist: Vec<usize> = (1..).map(|k| k * step).take_while(|&x| x <= dmax).collect();
            if dlist.last() != Some(&dmax) {
                dlist.push(dmax);
            }
            let report = verify_filtration(p, &dlist);
            let h0 = build_filtration_complex(p, dmax).map(|fc| filtration_h0(&fc, dmax)).ok();
            (report, json!({ "route": "filtration", "Dmax": dmax, "h0": h0 }))
        }
        Route::Tower => {
            let side = match side {
                Side::Hecke => TowerSide::Hecke,
                Side::Klr => TowerSide::Klr,
            };
            let nlist: Vec<usize> = (nmax.saturating_sub(2).max(1)..=nmax).collect();
            let report = verify_tower(p, side, &nlist, p.ell());
            let h0 = build_quotient_complex(p, side, nmax).map(|l| homology_ranks(&l.complex).h(0)).ok();
            let side_name = match side {
                TowerSide::Hecke => "hecke",
                TowerSide::Klr => "klr",
            };
            (report, json!({ "route": "tower", "side": side_name, "Nmax": nmax, "h0": h0 }))
        }
    }
}

fn dims(p: &ParamSet, cap: Option<usize>) -> (Report, Value) {
    let hecke = cyclotomic_dim_hecke(p, cap.unwrap_or_else(|| default_cap(p)));
    let klr = KlrAlg::from_params(p).and_then(|alg| alg.cyclotomic_dim(&p.lambda(), klr_cap(p)));
    let summary = json!({
        "hecke_dim": hecke.as_ref().ok().map(|h| h.dim),
        "hecke_block_dim": hecke.as_ref().ok().map(|h| h.block_dim),
        "klr_dim": klr.as_ref().ok().map(|k| k.dim),
    });
    (cross_oracle(p), summary)
}

fn strip_ms(v: &Value) -> Value {
    let mut v = v.clone();
    if let Some(checks) = v.get_mut("checks").and_then(Value::as_array_mut) {
        for c in checks {
            if let Some(o) = c.as_object_mut() {
                o.remove("ms");
            }
        }
    }
    v
}

fn render(p: &ParamSet, mut report: Report, summary: Value) -> String {
    report.sort();
    let mut doc = json!({
        "tool_version": env!("CARGO_PKG_VERSION"),
        "params": serde_json::to_value(p).expect("params serialize"),
        "checks": serde_json::to_value(&report.checks).expect("checks serialize"),
    });
    if !summary.is_null() {
        doc["summary"] = summary;
    }
    let canon = serde_json::to_string(&strip_ms(&doc)).expect("report serializes");
    doc["canonical_hash"] = Value::String(hex::encode(Sha256::digest(canon.as_bytes())));
    serde_json::to_string_pretty(&doc).expect("report serializes")
}

fn exit_code(report: &Report) -> u8 {
    if report.checks.iter().any(|c| c.status == Status::Error) {
        3
    } else if report.checks.iter().any(|c| c.status == Status::Fail) {
        1
    } else {
        0
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let args = match &cli.cmd {
        Command::VerifyRelations { p, .. }
        | Command::VerifyDifferential { p, .. }
        | Command::VerifyBkr { p, .. }
        | Command::Homology { p, .. }
        | Command::Dims { p, .. } => p,
    };
    let p = match args.resolve() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let (report, summary) = match &cli.cmd {
        Command::VerifyRelations { max_deg, .. } => (relations(&p, *max_deg), Value::Null),
        Command::VerifyDifferential { max_deg, random_p, seed, .. } => (differential(&p, *max_deg, *random_p, *seed), Value::Null),
        Command::VerifyBkr { trunc, samples, seed, .. } => (verify_bkr(&p, *trunc, *samples, *seed), Value::Null),
        Command::Homology { route, side, dmax, nmax, .. } => homology(&p, *route, *side, *dmax, *nmax),
        Command::Dims { cap, .. } => dims(&p, *cap),
    };
    let code = exit_code(&report);
    let text = render(&p, report, summary);
    println!("{text}");
    if let Some(path) = &args.out {
        if let Err(e) = std::fs::write(path, &text) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return ExitCode::from(3);
        }
    }
    ExitCode::from(code)
}
