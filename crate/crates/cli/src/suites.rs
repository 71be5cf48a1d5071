//! Named verification suites. Each produces one row per target.

use rayon::prelude::*;
use serde::Serialize;

use ranklab::arith::{gl_order, valuation};
use ranklab::constructions::{
    has_common_invariant_line, matrix_to_perm, swap_scalar_group, DEFAULT_POINT_CAP,
};
use ranklab::latmod::{generator_sum_instances, verify_generator_sum, verify_monomial_bound};
use ranklab::permgroup::{GroupTable, DEFAULT_CAP};
use ranklab::verify::{
    self, crosscheck_all, gl_rank_formula, odd_group_properties, rk2_dimension_bound,
    sylow_rank_bound_check, Budget, RankReport, Status,
};
use ranklab::Descriptor;

use crate::error::{CliError, EXIT_CAP, EXIT_MISMATCH};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Outcome {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, Serialize)]
pub struct Row {
    pub target: String,
    pub detail: String,
    pub outcome: Outcome,
}

impl Row {
    fn new(target: impl Into<String>, detail: impl Into<String>, pass: bool) -> Self {
        Row {
            target: target.into(),
            detail: detail.into(),
            outcome: if pass { Outcome::Pass } else { Outcome::Fail },
        }
    }
}

/// Exit code for a finished suite: any failure beats any skip.
pub fn exit_code(rows: &[Row]) -> u8 {
    if rows.iter().any(|r| r.outcome == Outcome::Fail) {
        EXIT_MISMATCH
    } else if rows.iter().any(|r| r.outcome == Outcome::Skipped) {
        EXIT_CAP
    } else {
        0
    }
}

pub fn render(rows: &[Row]) -> String {
    let mut out = String::new();
    for r in rows {
        let tag = match r.outcome {
            Outcome::Pass => "PASS",
            Outcome::Fail => "FAIL",
            Outcome::Skipped => "SKIP",
        };
        out.push_str(&format!("{tag}\t{}\t{}\n", r.target, r.detail));
    }
    let passed = rows.iter().filter(|r| r.outcome == Outcome::Pass).count();
    out.push_str(&format!("summary: {passed}/{} passed\n", rows.len()));
    out
}

fn report_row(r: &RankReport) -> Row {
    let show = |v: Option<u64>| v.map_or("-".to_string(), |v| v.to_string());
    let detail = format!(
        "formula {} brute {} {:?}",
        show(r.formula_value),
        show(r.brute_value),
        r.status
    );
    let outcome = match r.status {
        Status::Match => Outcome::Pass,
        Status::BruteSkipped | Status::LowerBoundOnly => Outcome::Skipped,
        Status::Mismatch | Status::Unchecked => Outcome::Fail,
    };
    Row {
        target: r.target.clone(),
        detail,
        outcome,
    }
}

fn crosscheck_rows(targets: &[Descriptor], budget: &Budget) -> Result<Vec<Row>, CliError> {
    crosscheck_all(targets, budget)
        .into_iter()
        .map(|r| r.map(|r| report_row(&r)).map_err(CliError::from))
        .collect()
}

pub fn xgroups(l: u64, amax: u32, rmax: u32, budget: &Budget) -> Result<Vec<Row>, CliError> {
    let mut targets = Vec::new();
    for a in 1..=amax {
        for r in 0..=rmax {
            targets.push(Descriptor::Xgroup { l, a, r });
        }
    }
    crosscheck_rows(&targets, budget)
}

pub fn ygroups(cmin: u32, cmax: u32, rmax: u32, budget: &Budget) -> Result<Vec<Row>, CliError> {
    let mut targets = Vec::new();
    for c in cmin..=cmax {
        for r in 0..=rmax {
            targets.push(Descriptor::Ygroup { c, r });
        }
    }
    crosscheck_rows(&targets, budget)
}

pub fn gl(ps: &[u64], ds: &[u32], ls: &[u64], budget: &Budget) -> Result<Vec<Row>, CliError> {
    let mut targets = Vec::new();
    for &p in ps {
        if p == 2 || !ranklab::arith::is_prime(p) {
            return Err(CliError::domain(format!("p = {p} is not an odd prime")));
        }
        for &l in ls {
            if l == p {
                continue;
            }
            for &d in ds {
                gl_rank_formula(p, l, d)?;
                targets.push(Descriptor::GlSylow { d, p, l });
            }
        }
    }
    crosscheck_rows(&targets, budget)
}

pub fn lemma_monomial(
    ls: &[u64],
    ns: Option<&[usize]>,
    ks: &[u32],
    trials: usize,
    seed: u64,
) -> Result<Vec<Row>, CliError> {
    let mut grid = Vec::new();
    for &l in ls {
        let default_ns = [l as usize, 2 * l as usize];
        for &n in ns.unwrap_or(&default_ns) {
            for &k in ks {
                grid.push((l, n, k));
            }
        }
    }
    grid.into_iter()
        .map(|(l, n, k)| {
            let r = verify_monomial_bound(l, n, k, trials, seed)?;
            Ok(Row::new(
                format!("ell={l} n={n} k={k}"),
                format!(
                    "trials {} violations {} max_generators {} bound {} seed {}",
                    r.trials, r.violations, r.max_generators, r.bound, r.seed
                ),
                r.violations == 0,
            ))
        })
        .collect()
}

pub fn generator_sum(ps: Option<&[u64]>, max_rank: usize) -> Result<Vec<Row>, CliError> {
    let instances: Vec<_> = generator_sum_instances()
        .into_iter()
        .filter(|(_, g)| g.d <= max_rank)
        .filter_map(|(name, g)| {
            let p = [3u64, 5, 7].into_iter().find(|p| g.modulus % p == 0)?;
            ps.map_or(true, |ps| ps.contains(&p))
                .then_some((name, p, g))
        })
        .collect();
    instances
        .par_iter()
        .map(|(name, p, g)| {
            let r = verify_generator_sum(*p, g)?;
            Ok(Row::new(
                name.clone(),
                format!(
                    "p {} k {} rank {} |G| {} d(G) {} d(M) {}",
                    r.p, r.k, r.rank, r.group_order, r.d_group, r.d_module
                ),
                r.holds,
            ))
        })
        .collect()
}

/// `rk_2(GL_d(F_p))` against the dimension bound and odd `rk_ell <= d`,
/// with optional brute force when the Sylow subgroup has order at most 512.
pub fn gl_bound(
    ps: &[u64],
    dmax: u32,
    lmax: u64,
    brute: bool,
    budget: &Budget,
) -> Result<Vec<Row>, CliError> {
    let mut rows = Vec::new();
    let mut brute_targets = Vec::new();
    for &p in ps {
        for d in 1..=dmax {
            let (rk2, case) = gl_rank_formula(p, 2, d)?;
            let bound = rk2_dimension_bound(p, d)?;
            let mut odd = Vec::new();
            let mut ok = rk2 == bound;
            for l in (3..=lmax).filter(|&l| ranklab::arith::is_prime(l) && l != p) {
                let (v, _) = gl_rank_formula(p, l, d)?;
                ok &= v <= d;
                odd.push(format!("rk_{l}={v}"));
            }
            rows.push(Row::new(
                format!("GL_{d}(F_{p})"),
                format!(
                    "rk_2={rk2} ({}) bound={bound} {}",
                    case.tag(),
                    odd.join(" ")
                ),
                ok,
            ));
            let sylow_log = valuation(&gl_order(d, p), 2);
            if brute && (p as u128).pow(d) <= 729 && sylow_log <= 9 {
                brute_targets.push(Descriptor::GlSylow { d, p, l: 2 });
            }
        }
    }
    rows.extend(crosscheck_rows(&brute_targets, budget)?);
    Ok(rows)
}

pub fn sharpness_examples(budget: &Budget) -> Result<Vec<Row>, CliError> {
    let mut rows = Vec::new();
    for p in [5u64, 13] {
        let s = swap_scalar_group(p)?;
        let g = GroupTable::closure(&matrix_to_perm(&s, DEFAULT_POINT_CAP)?, DEFAULT_CAP)?;
        let d = g.d_frattini(2)?;
        rows.push(Row::new(
            format!("S(F_{p})"),
            format!(
                "order {} d {d} irreducible {}",
                g.len(),
                !has_common_invariant_line(&s)
            ),
            g.len() == 16 && d == 3 && !has_common_invariant_line(&s),
        ));
    }
    rows.extend(crosscheck_rows(
        &[
            Descriptor::SwapScalar { p: 5 },
            Descriptor::AffineExtension {
                p: 3,
                m: 2,
                d: 2,
                k: 2,
            },
            Descriptor::AffineExtension {
                p: 5,
                m: 4,
                d: 1,
                k: 2,
            },
            Descriptor::DihedralPower { k: 2, count: 2 },
        ],
        budget,
    )?);
    Ok(rows)
}

/// The Sylow rank bound on every corpus group, plus the odd-order properties.
pub fn corpus(budget: &Budget) -> Result<Vec<Row>, CliError> {
    let targets = verify::corpus();
    let per_target: Vec<Result<Vec<Row>, CliError>> = targets
        .par_iter()
        .map(|desc| {
            let g = GroupTable::closure(&desc.build()?, budget.element_cap)?;
            let (ok, detail) = sylow_rank_bound_check(&g, budget.class_budget)?;
            let sylow: Vec<String> = detail
                .sylow_ranks
                .iter()
                .map(|(l, r)| format!("rk_{l}={r}"))
                .collect();
            let mut rows = vec![Row::new(
                desc.label(),
                format!(
                    "order {} rk {} {}",
                    detail.order,
                    detail.rank,
                    sylow.join(" ")
                ),
                ok,
            )];
            if let Some(props) = odd_group_properties(&g, budget.class_budget)? {
                rows.push(Row::new(
                    format!("{} (odd)", desc.label()),
                    format!(
                        "d {} class {} d-maximal {} log|Omega_1| {}",
                        props.d, props.class, props.d_maximal, props.omega1_log
                    ),
                    props.class_ok() && props.omega_ok(),
                ));
            }
            Ok(rows)
        })
        .collect();
    let mut rows = Vec::new();
    for r in per_target {
        rows.extend(r?);
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_follow_worst_row() {
        let pass = Row::new("a", "", true);
        let fail = Row::new("b", "", false);
        let skip = Row {
            outcome: Outcome::Skipped,
            ..pass.clone()
        };
        assert_eq!(exit_code(&[pass.clone()]), 0);
        assert_eq!(exit_code(&[pass.clone(), skip.clone()]), EXIT_CAP);
        assert_eq!(exit_code(&[skip, fail, pass]), EXIT_MISMATCH);
    }

    #[test]
    fn render_ends_with_summary() {
        let text = render(&[Row::new("X", "ok", true), Row::new("Y", "bad", false)]);
        assert_eq!(text, "PASS\tX\tok\nFAIL\tY\tbad\nsummary: 1/2 passed\n");
    }

    #[test]
    fn gl_bound_rows_pass() {
        let rows = gl_bound(&[3, 5, 7], 4, 7, false, &Budget::default()).unwrap();
        assert_eq!(rows.len(), 12);
        assert!(rows.iter().all(|r| r.outcome == Outcome::Pass));
    }
}
