//! Runs the ten acceptance criteria at full size and prints one line per
//! criterion. Exits nonzero if any criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use z2asym::oracle::OracleConfig;
use z2asym::suites::{run_suite, Suite, SuiteParams, SuiteReport};

struct Criterion {
    id: &'static str,
    title: &'static str,
    suite: Suite,
}

const CRITERIA: [Criterion; 10] = [
    Criterion { id: "AC1", title: "oracle agreement, 1000 pairs per axis, band 0.02", suite: Suite::Oracle },
    Criterion { id: "AC2", title: "equality residuals <= 1e-10", suite: Suite::Equalities },
    Criterion { id: "AC3", title: "inequality margins >= -1e-10", suite: Suite::Inequalities },
    Criterion { id: "AC4", title: "A-region realizability round trip", suite: Suite::Realizability },
    Criterion { id: "AC5", title: "pure-state B tags", suite: Suite::Pure },
    Criterion { id: "AC6", title: "fixed-purity identities", suite: Suite::Purity },
    Criterion { id: "AC7", title: "trace distance and refbit cost/yield", suite: Suite::Operational },
    Criterion { id: "AC8", title: "cross-section endpoints and pairwise relations", suite: Suite::CrossSections },
    Criterion { id: "AC9", title: "covariant channel certification", suite: Suite::Channels },
    Criterion { id: "AC10", title: "non-weakness witness and antichain", suite: Suite::Witness },
];

fn params() -> SuiteParams {
    SuiteParams {
        n: 100_000,
        seed: 1,
        pairs: 1000,
        margin: 0.02,
        oracle: OracleConfig { theta_grid_n: 64, uv_grid_n: 64, refine_steps: 3, hit_tol: 1e-3, seed: 1 },
        ..SuiteParams::default()
    }
}

fn summary(rep: &SuiteReport) -> String {
    rep.checks
        .iter()
        .map(|c| {
            let flag = if c.pass { "" } else { " FAIL" };
            format!("{} = {:.3e} (want {} {:.1e}){flag}", c.name, c.value, c.relation, c.limit)
        })
        .collect::<Vec<_>>()
        .join("; ")
}

fn main() -> ExitCode {
    let p = params();
    let mut failed = 0;
    for c in &CRITERIA {
        let start = Instant::now();
        let outcome = run_suite(c.suite, &p);
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(rep) => {
                let tag = if rep.pass { "PASS" } else { "FAIL" };
                failed += !rep.pass as usize;
                println!("[{tag}] {} {} ({} items, {secs:.1}s)", c.id, c.title, rep.checked);
                println!("       {}", summary(&rep));
            }
            Err(e) => {
                failed += 1;
                println!("[FAIL] {} {}: error {e}", c.id, c.title);
            }
        }
    }
    println!("{} of {} criteria passed", CRITERIA.len() - failed, CRITERIA.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
