//! The theorem-level report and text/JSON rendering of check reports.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use naimark::extensions::{stratum_dimension, ExtensionReport, Field, MapKind, Property};
use naimark::io::{format_matrix, Format};
use naimark::sampling::RNG_ALGORITHM;
use naimark::{check_property, CheckConfig, Result};

/// A predicted outcome and whether the observation agreed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Claim {
    pub description: String,
    pub matched: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DimensionRow {
    pub n: usize,
    /// `(d, real dimension, complex real-dimension)` for `d = 1..n-1`
    pub strata: Vec<(usize, usize, usize)>,
    pub rank_one: usize,
    pub rank_top: usize,
    /// `rank_one < rank_top` for `n >= 3`, equality at `n = 2`
    pub matched: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SizeReport {
    pub n: usize,
    pub checks: Vec<ExtensionReport>,
    pub claims: Vec<Claim>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TheoremReport {
    pub n_max: usize,
    pub trials: usize,
    pub seed: u64,
    pub rng: String,
    pub sizes: Vec<SizeReport>,
    pub dimensions: Vec<DimensionRow>,
    pub all_matched: bool,
}

const CHECKS: [(MapKind, Property); 7] = [
    (MapKind::Spectral, Property::ExtendsN),
    (MapKind::Spectral, Property::Involutive),
    (MapKind::Spectral, Property::Gale),
    (MapKind::Kernel, Property::ExtendsN),
    (MapKind::Kernel, Property::Involutive),
    (MapKind::Kernel, Property::Gale),
    (MapKind::Kernel, Property::DkBound),
];

fn claims_for(n: usize, reports: &[ExtensionReport]) -> Vec<Claim> {
    let find = |map, property| {
        reports
            .iter()
            .find(|r| r.map == map && r.property == property)
            .expect("every check is run")
    };
    let passes = |r: &ExtensionReport| r.failures == 0 && r.matches_prediction();
    let fails = |r: &ExtensionReport| r.failures > 0 && r.witness.is_some() && r.matches_prediction();

    let mut claims = vec![
        Claim {
            description: "spectral shift extends N".into(),
            matched: passes(find(MapKind::Spectral, Property::ExtendsN)),
        },
        Claim {
            description: "spectral shift is involutive".into(),
            matched: passes(find(MapKind::Spectral, Property::Involutive)),
        },
    ];
    let spectral_gale = find(MapKind::Spectral, Property::Gale);
    claims.push(if n == 2 {
        Claim {
            description: "spectral shift is Gale (n = 2)".into(),
            matched: passes(spectral_gale),
        }
    } else {
        Claim {
            description: "spectral shift fails Gale on samples with distinct positive eigenvalues".into(),
            matched: fails(spectral_gale),
        }
    });
    claims.extend([
        Claim {
            description: "kernel projection extends N".into(),
            matched: passes(find(MapKind::Kernel, Property::ExtendsN)),
        },
        Claim {
            description: "kernel projection is Gale".into(),
            matched: passes(find(MapKind::Kernel, Property::Gale)),
        },
        Claim {
            description: "kernel projection fails involutivity on non-projections".into(),
            matched: fails(find(MapKind::Kernel, Property::Involutive)),
        },
        Claim {
            description: "kernel projection obeys the Davis-Kahan bound".into(),
            matched: passes(find(MapKind::Kernel, Property::DkBound)),
        },
    ]);
    claims
}

pub fn dimension_row(n: usize) -> Result<DimensionRow> {
    let strata = (1..n)
        .map(|d| {
            Ok((
                d,
                stratum_dimension(d, n, Field::Real)?,
                stratum_dimension(d, n, Field::Complex)?,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    let rank_one = strata[0].1;
    let rank_top = strata[n - 2].1;
    let matched = if n == 2 {
        rank_one == rank_top
    } else {
        rank_one < rank_top
    };
    Ok(DimensionRow {
        n,
        strata,
        rank_one,
        rank_top,
        matched,
    })
}

/// Runs every (map, property) check for `n = 2..=n_max` plus the dimension table.
pub fn verify_theorem(n_max: usize, trials: usize, seed: u64, tol: f64) -> Result<TheoremReport> {
    let mut sizes = Vec::new();
    let mut dimensions = Vec::new();
    for n in 2..=n_max {
        let mut checks = Vec::with_capacity(CHECKS.len());
        for (map, property) in CHECKS {
            let mut cfg = CheckConfig::new(map, property, n, trials, seed);
            cfg.tol = tol;
            checks.push(check_property(&cfg)?);
        }
        let claims = claims_for(n, &checks);
        sizes.push(SizeReport { n, checks, claims });
        dimensions.push(dimension_row(n)?);
    }
    let all_matched = sizes
        .iter()
        .all(|s| s.claims.iter().all(|c| c.matched))
        && dimensions.iter().all(|d| d.matched);
    Ok(TheoremReport {
        n_max,
        trials,
        seed,
        rng: RNG_ALGORITHM.to_string(),
        sizes,
        dimensions,
        all_matched,
    })
}

fn write_report_lines(out: &mut String, r: &ExtensionReport, indent: &str) {
    let _ = writeln!(
        out,
        "{indent}{} {}: trials {} failures {} predicted {} mismatches {} worst_residual {:.6e}",
        r.map, r.property, r.trials, r.failures, r.predicted_failures, r.mismatches, r.worst_residual
    );
}

pub fn format_extension_report(r: &ExtensionReport, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(r).expect("report serializes");
            s.push('\n');
            s
        }
        Format::Text => {
            let mut out = String::new();
            let sampler = serde_json::to_value(r.sampler).expect("sampler serializes");
            let _ = writeln!(out, "map: {}", r.map);
            let _ = writeln!(out, "property: {}", r.property);
            let _ = writeln!(out, "n: {}", r.n);
            let _ = writeln!(out, "sampler: {}", sampler.as_str().unwrap_or_default());
            let _ = writeln!(out, "seed: {}", r.seed);
            let _ = writeln!(out, "rng: {}", r.rng);
            let _ = writeln!(out, "trials: {}", r.trials);
            let _ = writeln!(out, "failures: {}", r.failures);
            let _ = writeln!(out, "predicted_failures: {}", r.predicted_failures);
            let _ = writeln!(out, "mismatches: {}", r.mismatches);
            let _ = writeln!(out, "worst_residual: {:.16e}", r.worst_residual);
            match &r.witness {
                None => out.push_str("witness: none\n"),
                Some(w) => {
                    let _ = writeln!(out, "witness: trial {}", w.trial);
                    out.push_str("input:\n");
                    out.push_str(&format_matrix(&w.input, Format::Text));
                    out.push_str("output:\n");
                    out.push_str(&format_matrix(&w.output, Format::Text));
                }
            }
            out
        }
    }
}

pub fn format_theorem_report(r: &TheoremReport, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(r).expect("report serializes");
            s.push('\n');
            s
        }
        Format::Text => {
            let mut out = String::new();
            let _ = writeln!(
                out,
                "naimark extension report: n_max {} trials {} seed {}",
                r.n_max, r.trials, r.seed
            );
            let _ = writeln!(out, "rng: {}", r.rng);
            for size in &r.sizes {
                let _ = writeln!(out, "\n[n = {}]", size.n);
                for check in &size.checks {
                    write_report_lines(&mut out, check, "  ");
                }
                for claim in &size.claims {
                    let mark = if claim.matched { "ok  " } else { "FAIL" };
                    let _ = writeln!(out, "  {mark} {}", claim.description);
                }
                let witnesses: Vec<String> = size
                    .checks
                    .iter()
                    .filter_map(|c| c.witness.as_ref().map(|w| format!("{} {} (trial {})", c.map, c.property, w.trial)))
                    .collect();
                if !witnesses.is_empty() {
                    let _ = writeln!(out, "  witnesses: {}", witnesses.join(", "));
                }
            }
            out.push_str("\nstratum dimensions (real / complex):\n");
            for row in &r.dimensions {
                let cells: Vec<String> = row
                    .strata
                    .iter()
                    .map(|(d, re, co)| format!("d={d}: {re}/{co}"))
                    .collect();
                let relation = match row.rank_one.cmp(&row.rank_top) {
                    std::cmp::Ordering::Less => "<",
                    std::cmp::Ordering::Equal => "=",
                    std::cmp::Ordering::Greater => ">",
                };
                let mark = if row.matched { "ok" } else { "FAIL" };
                let _ = writeln!(
                    out,
                    "  n={}: {}  | rank-1 {} {relation} top (rank-{}) {} {mark}",
                    row.n,
                    cells.join(", "),
                    row.rank_one,
                    row.n - 1,
                    row.rank_top
                );
            }
            let _ = writeln!(
                out,
                "\nresult: {}",
                if r.all_matched { "all predictions matched" } else { "DEVIATION" }
            );
            out
        }
    }
}
