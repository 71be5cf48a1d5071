//! Closed-form rank formulas and the harness comparing them with brute force.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{is_prime, ladic_expansion, mult_order, prime_divisors, ArithError};
use crate::constructions::{ConstructionError, Descriptor, DEFAULT_POINT_CAP};
use crate::perm::GroupSpec;
use crate::permgroup::{GroupError, GroupTable, DEFAULT_CAP, DEFAULT_CLASS_BUDGET};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error("invalid parameter: {0}")]
    Domain(String),
    #[error("no closed-form rank is known for {0}")]
    NoFormula(String),
    #[error(transparent)]
    Construction(#[from] ConstructionError),
    #[error("{0}")]
    Group(String),
    #[error("subgroup class budget of {0} exhausted")]
    Budget(usize),
}

impl From<GroupError> for VerifyError {
    fn from(e: GroupError) -> Self {
        match e {
            GroupError::BudgetExceeded { budget, .. } => VerifyError::Budget(budget),
            other => VerifyError::Group(other.to_string()),
        }
    }
}

fn domain(msg: impl Into<String>) -> VerifyError {
    VerifyError::Domain(msg.into())
}

fn check_odd_prime(p: u64) -> Result<(), VerifyError> {
    if !is_prime(p) {
        return Err(ArithError::NotPrime(p).into());
    }
    if p == 2 {
        return Err(domain("p must be odd"));
    }
    Ok(())
}

/// Which branch of the `GL_d(F_p)` formula applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GlCase {
    /// `p != 1 mod ell`: `floor(d / m)`.
    NotOneModEll,
    /// `ell = 2`, `p = 1 mod 4`: `(3d - d0) / 2`.
    TwoOneModFour,
    /// Everything else: `d`.
    Default,
}

impl GlCase {
    pub fn tag(self) -> &'static str {
        match self {
            GlCase::NotOneModEll => "not-one-mod-ell",
            GlCase::TwoOneModFour => "two-one-mod-four",
            GlCase::Default => "default",
        }
    }
}

/// `rk_ell(GL_d(F_p))` for odd `p` and `ell != p`.
pub fn gl_rank_formula(p: u64, ell: u64, d: u32) -> Result<(u32, GlCase), VerifyError> {
    check_odd_prime(p)?;
    if !is_prime(ell) {
        return Err(ArithError::NotPrime(ell).into());
    }
    if ell == p {
        return Err(domain("ell must differ from p"));
    }
    if d == 0 {
        return Err(domain("d must be at least 1"));
    }
    if p % ell != 1 {
        let m = mult_order(p, ell)?;
        Ok((d / m, GlCase::NotOneModEll))
    } else if ell == 2 && p % 4 == 1 {
        Ok(((3 * d - d % 2) / 2, GlCase::TwoOneModFour))
    } else {
        Ok((d, GlCase::Default))
    }
}

/// `rk(X_{a,r}(ell))`.
pub fn x_rank_formula(ell: u64, a: u32, r: u32) -> u64 {
    if ell == 2 && a >= 2 && r >= 1 {
        3 << (r - 1)
    } else {
        ell.pow(r)
    }
}

/// `rk(Y_{c,r}) = 2^(r+1)`.
pub fn y_rank_formula(c: u32, r: u32) -> Result<u64, VerifyError> {
    if c < 3 {
        return Err(domain("c must be at least 3"));
    }
    Ok(1u64 << (r + 1))
}

/// Rank of a maximal finite `p`-subgroup of `GL_d(Q_p)`.
pub fn qp_max_p_rank(p: u64, d: u32) -> Result<u32, VerifyError> {
    check_odd_prime(p)?;
    Ok(d / (p - 1) as u32)
}

/// Upper bound on `rk_2` of a compact `p`-adic analytic group of dimension `dim`.
pub fn rk2_dimension_bound(p: u64, dim: u32) -> Result<u32, VerifyError> {
    check_odd_prime(p)?;
    Ok(if p % 4 == 1 { 3 * dim / 2 } else { dim })
}

/// The rank predicted for a construction, when a closed form is known.
pub fn formula_rank(desc: &Descriptor) -> Result<u64, VerifyError> {
    Ok(match *desc {
        Descriptor::Cyclic { n } => u64::from(n > 1),
        Descriptor::Semidihedral { c } => y_rank_formula(c, 0)?,
        Descriptor::IteratedWreath { l, r } => {
            if r == 0 {
                0
            } else {
                x_rank_formula(l, 1, r - 1)
            }
        }
        Descriptor::Xgroup { l, a, r } => x_rank_formula(l, a, r),
        Descriptor::Ygroup { c, r } => y_rank_formula(c, r)?,
        Descriptor::SylowSym { n, l } => ladic_expansion(n, l)
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &digit)| digit * l.pow(i as u32 - 1))
            .sum(),
        Descriptor::GlSylow { d, p, l } => u64::from(gl_rank_formula(p, l, d)?.0),
        Descriptor::SwapScalar { p } => u64::from(rk2_dimension_bound(p, 2)?),
        Descriptor::AffineExtension { d, .. } => u64::from(d) + 1,
        Descriptor::Dihedral { .. } => 2,
        Descriptor::DihedralPower { count, .. } => 2 * u64::from(count),
        Descriptor::Heisenberg { .. } => 2,
        Descriptor::Symmetric { .. } | Descriptor::GeneralLinear { .. } => {
            return Err(VerifyError::NoFormula(desc.label()))
        }
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    Match,
    Mismatch,
    BruteSkipped,
    LowerBoundOnly,
    /// Brute force ran but there is no formula to compare with.
    Unchecked,
}

/// Resource limits for a brute-force rank computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    pub element_cap: usize,
    pub class_budget: usize,
    pub point_cap: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            element_cap: DEFAULT_CAP,
            class_budget: DEFAULT_CLASS_BUDGET,
            point_cap: DEFAULT_POINT_CAP,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RankReport {
    pub target: String,
    pub descriptor: Option<Descriptor>,
    pub formula_value: Option<u64>,
    pub brute_value: Option<u64>,
    pub witness: Option<GroupSpec>,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub wall_ms: Option<u64>,
}

impl PartialEq for RankReport {
    fn eq(&self, other: &Self) -> bool {
        self.target == other.target
            && self.descriptor == other.descriptor
            && self.formula_value == other.formula_value
            && self.brute_value == other.brute_value
            && self.witness == other.witness
            && self.status == other.status
    }
}

impl Eq for RankReport {}

/// Outcome of a brute-force rank run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BruteRank {
    Exact { value: u64, witness: GroupSpec },
    LowerBound { value: u64, witness: GroupSpec },
    Skipped(String),
}

fn witness_spec(g: &GroupTable, gens: &[u32]) -> GroupSpec {
    GroupSpec::trivial(g.degree())
        .with_generators(gens.iter().map(|&i| g.element(i).clone()).collect())
}

/// Rank of the group generated by `spec`, with caps and budgets turned into
/// a skipped or partial outcome.
pub fn brute_rank(spec: &GroupSpec, budget: &Budget) -> Result<BruteRank, VerifyError> {
    let g = match GroupTable::closure(spec, budget.element_cap) {
        Ok(g) => g,
        Err(e @ GroupError::CapExceeded { .. }) => return Ok(BruteRank::Skipped(e.to_string())),
        Err(e) => return Err(e.into()),
    };
    let r = match g.rank(budget.class_budget) {
        Ok(r) => r,
        Err(e @ GroupError::SearchExhausted { .. }) => {
            return Ok(BruteRank::Skipped(e.to_string()))
        }
        Err(e) => return Err(e.into()),
    };
    let witness = witness_spec(&g, &r.witness_generators);
    let value = u64::from(r.value);
    Ok(if r.exhaustive {
        BruteRank::Exact { value, witness }
    } else {
        BruteRank::LowerBound { value, witness }
    })
}

fn classify(formula: Option<u64>, brute: &BruteRank) -> Status {
    match (formula, brute) {
        (_, BruteRank::Skipped(_)) => Status::BruteSkipped,
        (None, _) => Status::Unchecked,
        (Some(f), BruteRank::Exact { value, .. }) if *value == f => Status::Match,
        (Some(_), BruteRank::Exact { .. }) => Status::Mismatch,
        // a lower bound above the prediction already refutes it
        (Some(f), BruteRank::LowerBound { value, .. }) if *value > f => Status::Mismatch,
        (Some(_), BruteRank::LowerBound { .. }) => Status::LowerBoundOnly,
    }
}

fn report(
    target: String,
    descriptor: Option<Descriptor>,
    formula_value: Option<u64>,
    brute: Option<BruteRank>,
    start: Instant,
) -> RankReport {
    let status = match &brute {
        Some(b) => classify(formula_value, b),
        None => Status::BruteSkipped,
    };
    let (brute_value, witness) = match brute {
        Some(BruteRank::Exact { value, witness })
        | Some(BruteRank::LowerBound { value, witness }) => (Some(value), Some(witness)),
        _ => (None, None),
    };
    RankReport {
        target,
        descriptor,
        formula_value,
        brute_value,
        witness,
        status,
        wall_ms: Some(start.elapsed().as_millis() as u64),
    }
}

fn build_with_cap(desc: &Descriptor, budget: &Budget) -> Result<GroupSpec, ConstructionError> {
    match desc.matrix_group() {
        Some(m) => Ok(crate::constructions::matrix_to_perm(&m?, budget.point_cap)?
            .with_name(desc.label())
            .with_descriptor(desc.clone())),
        None => desc.build(),
    }
}

/// Build the target, compute its rank by exhaustive subgroup search and
/// compare with the closed form.
pub fn crosscheck(desc: &Descriptor, budget: &Budget) -> Result<RankReport, VerifyError> {
    let start = Instant::now();
    let formula = formula_rank(desc)?;
    let spec = match build_with_cap(desc, budget) {
        Ok(s) => s,
        Err(ConstructionError::CapExceeded { .. }) => {
            return Ok(report(
                desc.label(),
                Some(desc.clone()),
                Some(formula),
                None,
                start,
            ))
        }
        Err(e) => return Err(e.into()),
    };
    let brute = brute_rank(&spec, budget)?;
    Ok(report(
        desc.label(),
        Some(desc.clone()),
        Some(formula),
        Some(brute),
        start,
    ))
}

/// Rank report for an arbitrary group file; the formula is used only when
/// the file carries a descriptor with a known closed form.
pub fn rank_report(
    spec: &GroupSpec,
    use_formula: bool,
    use_brute: bool,
    budget: &Budget,
) -> Result<RankReport, VerifyError> {
    let start = Instant::now();
    let target = spec
        .name
        .clone()
        .or_else(|| spec.descriptor.as_ref().map(Descriptor::label))
        .unwrap_or_else(|| format!("group of degree {}", spec.degree));
    let formula = if use_formula {
        let desc = spec
            .descriptor
            .as_ref()
            .ok_or_else(|| domain("formula requires a construction descriptor"))?;
        Some(formula_rank(desc)?)
    } else {
        None
    };
    let brute = if use_brute {
        Some(brute_rank(spec, budget)?)
    } else {
        None
    };
    Ok(report(
        target,
        spec.descriptor.clone(),
        formula,
        brute,
        start,
    ))
}

/// Run many cross-checks in parallel; reports come back sorted by target.
pub fn crosscheck_all(
    targets: &[Descriptor],
    budget: &Budget,
) -> Vec<Result<RankReport, VerifyError>> {
    let mut sorted: Vec<&Descriptor> = targets.iter().collect();
    sorted.sort_by_key(|d| serde_json::to_string(d).expect("descriptor serializes"));
    sorted.dedup();
    sorted.par_iter().map(|d| crosscheck(d, budget)).collect()
}

/// Values behind the inequality `rk(G) <= max_ell rk_ell(G) + 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SylowBoundDetail {
    pub order: String,
    pub rank: u32,
    pub sylow_ranks: Vec<(u64, u32)>,
    pub max_sylow_rank: u32,
    pub holds: bool,
}

/// Check `rk(G) <= max_ell rk(Syl_ell(G)) + 1` by brute force.
pub fn sylow_rank_bound_check(
    g: &GroupTable,
    budget: usize,
) -> Result<(bool, SylowBoundDetail), VerifyError> {
    let exact = |t: &GroupTable| -> Result<u32, VerifyError> {
        let r = t.rank(budget)?;
        if !r.exhaustive {
            return Err(VerifyError::Budget(budget));
        }
        Ok(r.value)
    };
    let rank = exact(g)?;
    let primes = prime_divisors(&g.order());
    let mut sylow_ranks = Vec::new();
    if let [ell] = primes[..] {
        sylow_ranks.push((ell, rank));
    } else {
        for ell in primes {
            sylow_ranks.push((ell, exact(&g.sylow(ell))?));
        }
    }
    let max_sylow_rank = sylow_ranks.iter().map(|&(_, r)| r).max().unwrap_or(0);
    let holds = rank <= max_sylow_rank + 1;
    Ok((
        holds,
        SylowBoundDetail {
            order: g.order().to_string(),
            rank,
            sylow_ranks,
            max_sylow_rank,
            holds,
        },
    ))
}

/// Groups used for the corpus-wide property checks, all of order at most 512.
pub fn corpus() -> Vec<Descriptor> {
    use Descriptor::*;
    let mut out = vec![
        Symmetric { n: 4 },
        GeneralLinear { d: 2, p: 3 },
        SwapScalar { p: 5 },
        AffineExtension {
            p: 3,
            m: 2,
            d: 2,
            k: 2,
        },
        DihedralPower { k: 2, count: 2 },
        Semidihedral { c: 3 },
        Heisenberg { p: 3 },
        Heisenberg { p: 5 },
        GlSylow { d: 2, p: 7, l: 3 },
        GlSylow { d: 3, p: 5, l: 3 },
        SylowSym { n: 9, l: 3 },
        SylowSym { n: 6, l: 3 },
    ];
    for r in 0..=3 {
        out.push(IteratedWreath { l: 2, r });
    }
    for r in 0..=2 {
        out.push(IteratedWreath { l: 3, r });
    }
    out.push(IteratedWreath { l: 5, r: 1 });
    for (l, a, r) in [
        (2, 1, 0),
        (2, 2, 0),
        (2, 3, 0),
        (2, 1, 1),
        (2, 2, 1),
        (2, 3, 1),
        (2, 1, 2),
    ] {
        out.push(Xgroup { l, a, r });
    }
    for (l, a, r) in [
        (3, 1, 0),
        (3, 2, 0),
        (3, 3, 0),
        (3, 1, 1),
        (5, 1, 0),
        (5, 2, 0),
    ] {
        out.push(Xgroup { l, a, r });
    }
    for (c, r) in [(3, 0), (4, 0), (5, 0), (3, 1)] {
        out.push(Ygroup { c, r });
    }
    out
}

/// Properties checked for odd prime-power groups.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OddGroupProperties {
    pub ell: u64,
    pub d: u32,
    pub d_maximal: bool,
    pub class: u32,
    pub omega1_log: u32,
}

impl OddGroupProperties {
    /// d-maximal groups of odd order have class at most 2.
    pub fn class_ok(&self) -> bool {
        !self.d_maximal || self.class <= 2
    }

    /// `d(G) <= log_ell |Omega_1(G)|`.
    pub fn omega_ok(&self) -> bool {
        self.d <= self.omega1_log
    }
}

/// `None` when `g` is not a nontrivial group of odd prime-power order.
pub fn odd_group_properties(
    g: &GroupTable,
    budget: usize,
) -> Result<Option<OddGroupProperties>, VerifyError> {
    let ell = match g.prime() {
        Some(ell) if ell != 2 => ell,
        _ => return Ok(None),
    };
    let omega = g.omega1(ell)?;
    Ok(Some(OddGroupProperties {
        ell,
        d: g.d_frattini(ell)?,
        d_maximal: g.is_d_maximal(budget)?,
        class: g.nilpotency_class()?,
        omega1_log: omega.ell_exponent(ell).expect("omega1 is an ell-group"),
    }))
}
