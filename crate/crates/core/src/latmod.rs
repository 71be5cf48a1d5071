//! Modules over `Z/ell^k` with a matrix action: canonical spans, minimal
//! generator counts, the monomial generator bound, lattices for a cyclic
//! group of prime order, and the generator inequality for `p`-groups.
//!
//! Vectors are rows and matrices act on the right, `v -> v h`.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{inv_mod, is_prime, mul_mod, prime_power};
use crate::constructions::{matrix_orbit_perm, ConstructionError};
use crate::ff::{char_poly, eval_matrix_poly, irreducible_factors};
use crate::matrix::{Matrix, MatrixGroupSpec};
use crate::perm::Perm;
use crate::permgroup::{GroupError, GroupTable, DEFAULT_CAP};

#[derive(Debug, Clone, Error)]
pub enum LatticeError {
    #[error("submodule is not invariant under the action")]
    NotInvariant,
    #[error("no decomposition into trivial, augmentation and free lattices: {0}")]
    NotDecomposable(String),
    #[error("result changed between precisions {low} and {high}")]
    PrecisionUnstable { low: u32, high: u32 },
    #[error("the group does not act faithfully modulo p (reduction kernel is nontrivial)")]
    NotFaithful,
    #[error("invalid input: {0}")]
    Domain(String),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Construction(#[from] ConstructionError),
}

fn domain(msg: impl Into<String>) -> LatticeError {
    LatticeError::Domain(msg.into())
}

fn valuation_mod(x: u64, ell: u64, k: u32) -> u32 {
    if x == 0 {
        return k;
    }
    let mut e = 0;
    let mut x = x;
    while x % ell == 0 {
        x /= ell;
        e += 1;
    }
    e
}

fn ring_params(q: u64) -> (u64, u32) {
    prime_power(q).expect("modulus must be a prime power")
}

fn axpy(v: &mut [u64], c: u64, w: &[u64], q: u64) {
    if c == 0 {
        return;
    }
    for (x, &y) in v.iter_mut().zip(w) {
        *x = (*x + q - mul_mod(c, y, q)) % q;
    }
}

/// Canonical (Howell) basis of the row span of `vectors` over `Z/q`, `q` a
/// prime power.
///
/// Each row has a leading entry that is a power of the prime, entries above
/// a leading entry are reduced below it, and every span element whose first
/// `c` coordinates vanish is a combination of the rows that start after
/// column `c`. The basis depends only on the span.
pub fn howell_basis(vectors: &[Vec<u64>], q: u64) -> Vec<Vec<u64>> {
    let Some(width) = vectors.first().map(Vec::len) else {
        return Vec::new();
    };
    let (ell, k) = ring_params(q);
    let mut pending: Vec<Vec<u64>> = vectors
        .iter()
        .map(|v| v.iter().map(|x| x % q).collect::<Vec<_>>())
        .filter(|v| v.iter().any(|&x| x != 0))
        .collect();
    let mut basis: Vec<(usize, Vec<u64>)> = Vec::new();
    for col in 0..width {
        let Some(idx) = (0..pending.len())
            .filter(|&i| pending[i][col] != 0)
            .min_by_key(|&i| valuation_mod(pending[i][col], ell, k))
        else {
            continue;
        };
        let mut piv = pending.swap_remove(idx);
        let e = valuation_mod(piv[col], ell, k);
        let lead = ell.pow(e);
        let unit_inv = inv_mod(piv[col] / lead, q).expect("unit part is invertible");
        for x in piv.iter_mut() {
            *x = mul_mod(*x, unit_inv, q);
        }
        for r in pending.iter_mut() {
            let c = r[col] / lead;
            axpy(r, c, &piv, q);
        }
        if e > 0 {
            let scale = ell.pow(k - e);
            pending.push(piv.iter().map(|&x| mul_mod(x, scale, q)).collect());
        }
        pending.retain(|v| v.iter().any(|&x| x != 0));
        basis.push((col, piv));
    }
    for i in 0..basis.len() {
        for j in i + 1..basis.len() {
            let (col, ref row_j) = basis[j];
            let lead = row_j[col];
            let c = basis[i].1[col] / lead;
            let row_j = row_j.clone();
            axpy(&mut basis[i].1, c, &row_j, q);
        }
    }
    basis.into_iter().map(|(_, v)| v).collect()
}

fn leading(v: &[u64]) -> usize {
    v.iter()
        .position(|&x| x != 0)
        .expect("basis rows are nonzero")
}

/// `log_ell` of the number of elements in the span of a Howell basis.
pub fn span_log_size(basis: &[Vec<u64>], q: u64) -> u32 {
    let (ell, k) = ring_params(q);
    basis
        .iter()
        .map(|row| k - valuation_mod(row[leading(row)], ell, k))
        .sum()
}

/// Remainder of `v` against a Howell basis; zero iff `v` lies in the span.
pub fn reduce(v: &[u64], basis: &[Vec<u64>], q: u64) -> Vec<u64> {
    let mut v: Vec<u64> = v.iter().map(|x| x % q).collect();
    for row in basis {
        let col = leading(row);
        let c = v[col] / row[col];
        axpy(&mut v, c, row, q);
    }
    v
}

pub fn in_span(v: &[u64], basis: &[Vec<u64>], q: u64) -> bool {
    reduce(v, basis, q).iter().all(|&x| x == 0)
}

/// Every element of the span of a Howell basis.
pub fn span_elements(basis: &[Vec<u64>], q: u64) -> Vec<Vec<u64>> {
    let (ell, k) = ring_params(q);
    let width = basis.first().map_or(0, Vec::len);
    let mut out = vec![vec![0u64; width]];
    for row in basis {
        let col = leading(row);
        let steps = ell.pow(k - valuation_mod(row[col], ell, k));
        let mut next = Vec::with_capacity(out.len() * steps as usize);
        for v in &out {
            for c in 0..steps {
                let mut w = v.clone();
                for (x, &y) in w.iter_mut().zip(row) {
                    *x = (*x + mul_mod(c, y, q)) % q;
                }
                next.push(w);
            }
        }
        out = next;
    }
    out
}

/// Monomial matrix over `Z/ell^k`: row `i` has the single entry
/// `units[i]` in column `sigma(i)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialMatrix {
    pub ell: u64,
    pub k: u32,
    pub sigma: Perm,
    pub units: Vec<u64>,
}

impl MonomialMatrix {
    pub fn new(ell: u64, k: u32, sigma: Perm, units: Vec<u64>) -> Result<Self, LatticeError> {
        if !is_prime(ell) || k == 0 {
            return Err(domain("need a prime ell and k >= 1"));
        }
        if units.len() != sigma.degree() {
            return Err(domain("one unit per coordinate"));
        }
        let q = ell.pow(k);
        if units.iter().any(|&u| u % ell == 0 || u >= q) {
            return Err(domain("entries must be units below the modulus"));
        }
        Ok(MonomialMatrix {
            ell,
            k,
            sigma,
            units,
        })
    }

    pub fn n(&self) -> usize {
        self.units.len()
    }

    pub fn modulus(&self) -> u64 {
        self.ell.pow(self.k)
    }

    pub fn to_matrix(&self) -> Matrix {
        let n = self.n();
        let mut m = Matrix(vec![0; n * n]);
        for i in 0..n {
            m.set(i, self.sigma.apply(i as u32) as usize, self.units[i]);
        }
        m
    }
}

/// A submodule of `(Z/q)^n` for the action of a single matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Submodule {
    pub action: Matrix,
    pub q: u64,
    pub generators: Vec<Vec<u64>>,
    /// Howell basis of the span.
    pub basis: Vec<Vec<u64>>,
}

impl Submodule {
    /// The span of `generators`, which must already be invariant.
    pub fn spanned(
        action: Matrix,
        q: u64,
        generators: Vec<Vec<u64>>,
    ) -> Result<Self, LatticeError> {
        let basis = howell_basis(&generators, q);
        let m = Submodule {
            action,
            q,
            generators,
            basis,
        };
        if !m.is_invariant() {
            return Err(LatticeError::NotInvariant);
        }
        Ok(m)
    }

    /// The smallest invariant submodule containing `generators`.
    pub fn generated(action: Matrix, q: u64, generators: Vec<Vec<u64>>) -> Self {
        let mut basis = howell_basis(&generators, q);
        loop {
            let mut rows = basis.clone();
            rows.extend(basis.iter().map(|v| action.apply_row(v, q)));
            let next = howell_basis(&rows, q);
            if next == basis {
                break;
            }
            basis = next;
        }
        Submodule {
            action,
            q,
            generators,
            basis,
        }
    }

    /// The whole of `(Z/q)^n`.
    pub fn full(action: Matrix, q: u64) -> Self {
        let n = action.dim();
        let gens = (0..n)
            .map(|i| {
                let mut e = vec![0u64; n];
                e[i] = 1;
                e
            })
            .collect();
        Submodule::generated(action, q, gens)
    }

    pub fn is_invariant(&self) -> bool {
        self.basis
            .iter()
            .all(|v| in_span(&self.action.apply_row(v, self.q), &self.basis, self.q))
    }

    pub fn log_size(&self) -> u32 {
        span_log_size(&self.basis, self.q)
    }
}

/// Minimal number of generators of `M` as a module over `R = (Z/q)[h]`.
///
/// `R` is the product of its localisations at the maximal ideals
/// `(ell, f(h))`, `f` running over the irreducible factors of the
/// characteristic polynomial of `h` mod `ell`, so the count is the largest
/// `dim M / (ell M + f(h) M)` over the residue fields.
pub fn min_gen_count(m: &Submodule) -> Result<u32, LatticeError> {
    if !m.is_invariant() {
        return Err(LatticeError::NotInvariant);
    }
    if m.basis.is_empty() {
        return Ok(0);
    }
    let (ell, _) = ring_params(m.q);
    let total = m.log_size();
    let mut best = 0;
    for f in irreducible_factors(&char_poly(&m.action, ell), ell) {
        let fh = eval_matrix_poly(&f, &m.action, m.q);
        let mut rows: Vec<Vec<u64>> = m
            .basis
            .iter()
            .map(|v| v.iter().map(|&x| mul_mod(x, ell, m.q)).collect())
            .collect();
        rows.extend(m.basis.iter().map(|v| fh.apply_row(v, m.q)));
        let quotient = total - span_log_size(&howell_basis(&rows, m.q), m.q);
        let deg = (f.len() - 1) as u32;
        debug_assert_eq!(quotient % deg, 0);
        best = best.max(quotient / deg);
    }
    Ok(best)
}

/// Outcome of a batch of sampled monomial modules.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonomialBoundReport {
    pub ell: u64,
    pub n: usize,
    pub k: u32,
    pub trials: usize,
    pub seed: u64,
    /// `2n / ell`.
    pub bound: u32,
    pub violations: usize,
    pub max_generators: u32,
}

/// A fixed-point-free permutation of `n` points whose cycles all have
/// `ell`-power length.
fn sample_sigma(n: usize, ell: u64, rng: &mut ChaCha8Rng) -> Perm {
    let mut points: Vec<u32> = (0..n as u32).collect();
    for i in (1..n).rev() {
        points.swap(i, rng.gen_range(0..=i));
    }
    let mut images: Vec<u32> = (0..n as u32).collect();
    let mut start = 0;
    while start < n {
        let remaining = n - start;
        let lengths: Vec<usize> =
            std::iter::successors(Some(ell as usize), |&l| Some(l * ell as usize))
                .take_while(|&l| l <= remaining)
                .collect();
        let len = lengths[rng.gen_range(0..lengths.len())];
        for j in 0..len {
            images[points[start + j] as usize] = points[start + (j + 1) % len];
        }
        start += len;
    }
    Perm::new(images).expect("cycle decomposition is a permutation")
}

fn sample_unit(q: u64, ell: u64, rng: &mut ChaCha8Rng) -> u64 {
    loop {
        let u = rng.gen_range(1..q);
        if u % ell != 0 {
            return u;
        }
    }
}

/// One sampled pair `(h, M)` for the monomial bound.
pub fn sample_monomial_module(
    ell: u64,
    n: usize,
    k: u32,
    rng: &mut ChaCha8Rng,
) -> (MonomialMatrix, Submodule) {
    let q = ell.pow(k);
    let sigma = sample_sigma(n, ell, rng);
    let units = (0..n).map(|_| sample_unit(q, ell, rng)).collect();
    let h = MonomialMatrix::new(ell, k, sigma, units).expect("sampled data is valid");
    let count = rng.gen_range(1..=3);
    let gens = (0..count)
        .map(|_| {
            let scale = ell.pow(rng.gen_range(0..k));
            (0..n)
                .map(|_| mul_mod(rng.gen_range(0..q), scale, q))
                .collect()
        })
        .collect();
    let m = Submodule::generated(h.to_matrix(), q, gens);
    (h, m)
}

/// Sample `trials` pairs and count those with `d(M) > 2n / ell`. Trial `i`
/// draws from stream `i` of a generator seeded with `seed`, so the result
/// does not depend on scheduling.
pub fn verify_monomial_bound(
    ell: u64,
    n: usize,
    k: u32,
    trials: usize,
    seed: u64,
) -> Result<MonomialBoundReport, LatticeError> {
    if !is_prime(ell) || n == 0 || n % ell as usize != 0 || k == 0 {
        return Err(domain(
            "need prime ell, k >= 1 and n a positive multiple of ell",
        ));
    }
    let bound = (2 * n / ell as usize) as u32;
    let counts: Vec<u32> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(t as u64);
            let (_, m) = sample_monomial_module(ell, n, k, &mut rng);
            min_gen_count(&m).expect("generated submodules are invariant")
        })
        .collect();
    Ok(MonomialBoundReport {
        ell,
        n,
        k,
        trials,
        seed,
        bound,
        violations: counts.iter().filter(|&&c| c > bound).count(),
        max_generators: counts.iter().copied().max().unwrap_or(0),
    })
}

/// Multiplicities of the trivial, augmentation (`Z[x]/Phi_p`) and free
/// lattices in a lattice for a cyclic group of order `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeMultiplicities {
    pub a: u32,
    pub b: u32,
    pub c: u32,
}

impl LatticeMultiplicities {
    pub fn rank(&self, p: u64) -> u32 {
        self.a + self.b * (p as u32 - 1) + self.c * p as u32
    }
}

/// An integral lattice with an action of order `p`, stored modulo a large
/// power `p^cap` so it can be read at any precision up to `cap`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclicLattice {
    pub p: u64,
    pub cap: u32,
    pub action: Matrix,
}

fn precision_cap(p: u64) -> u32 {
    let mut k = 1;
    while (p as u128).pow(k + 1) <= 1 << 31 {
        k += 1;
    }
    k
}

fn int_matrix(rows: &[Vec<i64>], modulus: u64) -> Matrix {
    let refs: Vec<&[i64]> = rows.iter().map(Vec::as_slice).collect();
    Matrix::from_rows(&refs, modulus)
}

/// Row-convention companion matrix of the monic integer polynomial with
/// lower coefficients `coeffs`.
fn companion_rows(coeffs: &[i64]) -> Vec<Vec<i64>> {
    let n = coeffs.len();
    let mut rows = vec![vec![0i64; n]; n];
    for i in 0..n.saturating_sub(1) {
        rows[i][i + 1] = 1;
    }
    for j in 0..n {
        rows[n - 1][j] = -coeffs[j];
    }
    rows
}

impl CyclicLattice {
    fn from_rows(p: u64, rows: &[Vec<i64>]) -> Self {
        let cap = precision_cap(p);
        CyclicLattice {
            p,
            cap,
            action: int_matrix(rows, p.pow(cap)),
        }
    }

    pub fn modulus(&self) -> u64 {
        self.p.pow(self.cap)
    }

    pub fn rank(&self) -> usize {
        self.action.dim()
    }

    /// `Z^r` with the trivial action.
    pub fn trivial(p: u64, r: usize) -> Self {
        let rows: Vec<Vec<i64>> = (0..r)
            .map(|i| (0..r).map(|j| i64::from(i == j)).collect())
            .collect();
        CyclicLattice::from_rows(p, &rows)
    }

    /// `Z[x] / Phi_p(x)` of rank `p - 1`.
    pub fn augmentation(p: u64) -> Self {
        CyclicLattice::from_rows(p, &companion_rows(&vec![1i64; p as usize - 1]))
    }

    /// The group ring `Z C_p`, rank `p`.
    pub fn free(p: u64) -> Self {
        let n = p as usize;
        let rows: Vec<Vec<i64>> = (0..n)
            .map(|i| (0..n).map(|j| i64::from(j == (i + 1) % n)).collect())
            .collect();
        CyclicLattice::from_rows(p, &rows)
    }

    /// `a` trivial, `b` augmentation and `c` free summands, in that order.
    pub fn direct_sum(p: u64, m: LatticeMultiplicities) -> Self {
        let mut blocks = Vec::new();
        if m.a > 0 {
            blocks.push(CyclicLattice::trivial(p, m.a as usize).action);
        }
        for _ in 0..m.b {
            blocks.push(CyclicLattice::augmentation(p).action);
        }
        for _ in 0..m.c {
            blocks.push(CyclicLattice::free(p).action);
        }
        CyclicLattice {
            p,
            cap: precision_cap(p),
            action: Matrix::block_diagonal(&blocks),
        }
    }

    /// The same lattice written in a random integral basis.
    pub fn change_basis(&self, seed: u64) -> Self {
        let (u, u_inv) = random_unimodular(self.rank(), seed, self.modulus());
        CyclicLattice {
            action: u
                .mul(&self.action, self.modulus())
                .mul(&u_inv, self.modulus()),
            ..self.clone()
        }
    }

    /// The action reduced to `Z/p^k`.
    pub fn at_precision(&self, k: u32) -> Matrix {
        self.action.reduce(self.p.pow(k))
    }
}

/// A random product of elementary integer matrices and its inverse,
/// reduced mod `modulus`.
pub fn random_unimodular(n: usize, seed: u64, modulus: u64) -> (Matrix, Matrix) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut u = Matrix::identity(n);
    let mut u_inv = Matrix::identity(n);
    if n < 2 {
        return (u, u_inv);
    }
    for _ in 0..3 * n {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let t: i64 = [-2, -1, 1, 2][rng.gen_range(0..4)];
        let mut e = Matrix::identity(n);
        e.set(i, j, t.rem_euclid(modulus as i64) as u64);
        let mut e_inv = Matrix::identity(n);
        e_inv.set(i, j, (-t).rem_euclid(modulus as i64) as u64);
        u = e.mul(&u, modulus);
        u_inv = u_inv.mul(&e_inv, modulus);
    }
    (u, u_inv)
}

fn rows_of(m: &Matrix) -> Vec<Vec<u64>> {
    let n = m.dim();
    (0..n)
        .map(|i| (0..n).map(|j| m.get(i, j)).collect())
        .collect()
}

fn sub_identity(m: &Matrix, q: u64) -> Matrix {
    let mut out = m.clone();
    for i in 0..m.dim() {
        out.set(i, i, (m.get(i, i) + q - 1) % q);
    }
    out
}

/// `(log_p |M^C|, log_p |N M|)` at precision `k`, `N = 1 + x + .. + x^(p-1)`.
fn fixed_and_norm(lat: &CyclicLattice, k: u32) -> (u32, u32) {
    let q = lat.p.pow(k);
    let x = lat.at_precision(k);
    let n = lat.rank() as u32;
    let image = span_log_size(&howell_basis(&rows_of(&sub_identity(&x, q)), q), q);
    let mut norm = Matrix(vec![0; x.0.len()]);
    let mut power = Matrix::identity(x.dim());
    for _ in 0..lat.p {
        for (a, b) in norm.0.iter_mut().zip(&power.0) {
            *a = (*a + b) % q;
        }
        power = power.mul(&x, q);
    }
    let norm_image = span_log_size(&howell_basis(&rows_of(&norm), q), q);
    (k * n - image, norm_image)
}

/// Solve for the multiplicities from precisions `k` and `k + 1`.
///
/// Over `Z/p^k` the trivial, augmentation and free lattices contribute
/// `p^k`, `p` and `p^k` fixed points and `p^(k-1)`, `1` and `p^k` to `N M`.
/// The growth of the fixed points from `k` to `k + 1` is therefore `a + c`
/// and `log_p |M^C / N M| = a + b`; together with the rank this determines
/// `(a, b, c)`.
fn solve_multiplicities(
    lat: &CyclicLattice,
    k: u32,
) -> Result<LatticeMultiplicities, LatticeError> {
    let p = lat.p as i64;
    let n = lat.rank() as i64;
    let (fix_k, norm_k) = fixed_and_norm(lat, k);
    let (fix_next, _) = fixed_and_norm(lat, k + 1);
    let r1 = fix_next as i64 - fix_k as i64;
    let quotient = fix_k as i64 - norm_k as i64;
    let num = quotient * (p - 1) + r1 * p - n;
    let den = 2 * (p - 1);
    if num < 0 || num % den != 0 {
        return Err(LatticeError::NotDecomposable(format!(
            "trivial multiplicity {num}/{den} is not a nonnegative integer"
        )));
    }
    let a = num / den;
    let (b, c) = (quotient - a, r1 - a);
    if b < 0 || c < 0 || a + b * (p - 1) + c * p != n {
        return Err(LatticeError::NotDecomposable(format!(
            "inconsistent multiplicities ({a}, {b}, {c}) for rank {n}"
        )));
    }
    Ok(LatticeMultiplicities {
        a: a as u32,
        b: b as u32,
        c: c as u32,
    })
}

/// Decompose a lattice for `C_p` at precision `k >= 2`, recomputing one
/// step higher and requiring agreement.
pub fn lattice_decompose(
    lat: &CyclicLattice,
    k: u32,
) -> Result<LatticeMultiplicities, LatticeError> {
    if k < 2 {
        return Err(domain("precision must be at least 2"));
    }
    if k + 2 > lat.cap {
        return Err(domain(format!("precision {k} exceeds the stored range")));
    }
    let q = lat.p.pow(k + 2);
    let x = lat.at_precision(k + 2);
    if x.pow(lat.p, q) != Matrix::identity(lat.rank()) {
        return Err(domain("the action does not have order dividing p"));
    }
    let low = solve_multiplicities(lat, k)?;
    let high = solve_multiplicities(lat, k + 1)?;
    if low != high {
        return Err(LatticeError::PrecisionUnstable {
            low: k,
            high: k + 1,
        });
    }
    Ok(low)
}

/// Outcome of the inequality `d(G) + d_{RG}(M) <= rank M`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorSumReport {
    pub p: u64,
    pub k: u32,
    pub rank: usize,
    pub group_order: u64,
    pub d_group: u32,
    pub d_module: u32,
    pub holds: bool,
}

fn permutation_table(g: &MatrixGroupSpec) -> Result<GroupTable, LatticeError> {
    let spec = matrix_orbit_perm(g, DEFAULT_CAP as u64)?;
    Ok(GroupTable::closure(&spec, DEFAULT_CAP)?)
}

/// Row-reduced basis over `F_p` of the smallest submodule containing
/// `seeds` and stable under every generator.
fn fp_closure(gens: &[Matrix], p: u64, seeds: Vec<Vec<u64>>) -> Vec<Vec<u64>> {
    let mut basis = howell_basis(&seeds, p);
    loop {
        let mut rows = basis.clone();
        for g in gens {
            rows.extend(basis.iter().map(|v| g.apply_row(v, p)));
        }
        let next = howell_basis(&rows, p);
        if next == basis {
            return basis;
        }
        basis = next;
    }
}

/// Minimal number of generators of `F_p^n` as a module for the matrices
/// `gens`, by level-wise search over generated submodules (one vector per
/// line suffices). By Nakayama's
/// lemma this is also the count for `(Z/p^k)^n` over `(Z/p^k) G`.
pub fn min_generators_exhaustive(gens: &[Matrix], p: u64, n: usize) -> u32 {
    if n == 0 {
        return 0;
    }
    let gens: Vec<Matrix> = gens.iter().map(|g| g.reduce(p)).collect();
    let vectors: Vec<Vec<u64>> = span_elements(&howell_basis(&rows_of(&Matrix::identity(n)), p), p)
        .into_iter()
        .filter(|v| v.iter().find(|&&x| x != 0) == Some(&1))
        .collect();
    let mut level: Vec<Vec<Vec<u64>>> = vec![Vec::new()];
    for d in 1..=n as u32 {
        let mut next: Vec<Vec<Vec<u64>>> = Vec::new();
        let mut seen = std::collections::HashSet::new();
        for k in &level {
            // extensions of k already formed; a vector inside one of them
            // gives nothing larger
            let mut formed: Vec<Vec<Vec<u64>>> = vec![k.clone()];
            for v in &vectors {
                if formed.iter().any(|f| !f.is_empty() && in_span(v, f, p)) {
                    continue;
                }
                let mut seeds = k.clone();
                seeds.push(v.clone());
                let h = fp_closure(&gens, p, seeds);
                if h.len() == n {
                    return d;
                }
                formed.push(h.clone());
                if seen.insert(h.clone()) {
                    next.push(h);
                }
            }
        }
        next.sort_by_key(|h| std::cmp::Reverse(h.len()));
        let mut kept: Vec<Vec<Vec<u64>>> = Vec::new();
        for h in next {
            let dominated = kept
                .iter()
                .any(|k| k.len() > h.len() && h.iter().all(|v| in_span(v, k, p)));
            if !dominated {
                kept.push(h);
            }
        }
        level = kept;
    }
    n as u32
}

/// `dim_{F_p} M / (p M + I_G M)`, the generator count when `G` is a
/// `p`-group (the group ring is then local).
pub fn local_generator_count(gens: &[Matrix], p: u64, n: usize) -> u32 {
    let rows: Vec<Vec<u64>> = gens
        .iter()
        .flat_map(|g| rows_of(&sub_identity(&g.reduce(p), p)))
        .collect();
    n as u32 - howell_basis(&rows, p).len() as u32
}

/// Check `d(G) + d_{(Z/p^k)G}(M) <= rank M` for `M = (Z/p^k)^n` and a
/// `p`-group `G` of matrices.
///
/// The module count uses the maximal-ideal formula over `(Z/p^k)[g]` when
/// `G` is given by one matrix and the exhaustive search otherwise.
pub fn verify_generator_sum(
    p: u64,
    g: &MatrixGroupSpec,
) -> Result<GeneratorSumReport, LatticeError> {
    if p == 2 || !is_prime(p) {
        return Err(domain("p must be an odd prime"));
    }
    let (base, k) = prime_power(g.modulus).ok_or_else(|| domain("modulus must be a power of p"))?;
    if base != p {
        return Err(domain("modulus must be a power of p"));
    }
    let table = permutation_table(g)?;
    let order = table.len() as u64;
    if order > 1 && table.prime() != Some(p) {
        return Err(domain("the group must be a p-group"));
    }
    let reduced = MatrixGroupSpec {
        d: g.d,
        modulus: p,
        generators: g.generators.iter().map(|m| m.reduce(p)).collect(),
    };
    if permutation_table(&reduced)?.len() as u64 != order {
        return Err(LatticeError::NotFaithful);
    }
    let d_group = if order == 1 { 0 } else { table.d_frattini(p)? };
    let d_module = match g.generators.as_slice() {
        [h] => min_gen_count(&Submodule::full(h.clone(), g.modulus))?,
        gens => min_generators_exhaustive(gens, p, g.d),
    };
    Ok(GeneratorSumReport {
        p,
        k,
        rank: g.d,
        group_order: order,
        d_group,
        d_module,
        holds: d_group + d_module <= g.d as u32,
    })
}

fn lattice_group(p: u64, k: u32, gens: Vec<Matrix>, n: usize) -> MatrixGroupSpec {
    MatrixGroupSpec {
        d: n,
        modulus: p.pow(k),
        generators: gens.into_iter().map(|m| m.reduce(p.pow(k))).collect(),
    }
}

/// Generators acting independently, generator `i` on block `i` only.
fn independent_blocks(blocks: &[CyclicLattice]) -> Vec<Matrix> {
    let n: usize = blocks.iter().map(CyclicLattice::rank).sum();
    let mut offset = 0;
    blocks
        .iter()
        .map(|b| {
            let m = b.action.embed(offset, n);
            offset += b.rank();
            m
        })
        .collect()
}

/// `C_p wr C_p` acting monomially on `Z[zeta_p]^p`.
fn wreath_monomial(p: u64) -> Vec<Matrix> {
    let zeta = CyclicLattice::augmentation(p);
    let block = zeta.rank();
    let n = block * p as usize;
    let base = zeta.action.embed(0, n);
    let images: Vec<u32> = (0..n).map(|i| ((i + block) % n) as u32).collect();
    vec![base, Matrix::permutation(&images)]
}

/// The test instances: every lattice for `C_3` and `C_5` of rank at most 6
/// on which the action is faithful, in standard and in random bases, plus
/// noncyclic groups of order 9, 27 and 81 and `C_9` on `Z[zeta_9]`; each
/// at precisions 2 and 3.
pub fn generator_sum_instances() -> Vec<(String, MatrixGroupSpec)> {
    let mut out = Vec::new();
    for k in [2u32, 3] {
        for p in [3u64, 5] {
            for c in 0..=2u32 {
                for b in 0..=3u32 {
                    for a in 0..=6u32 {
                        let m = LatticeMultiplicities { a, b, c };
                        if b + c == 0 || m.rank(p) > 6 {
                            continue;
                        }
                        let lat = CyclicLattice::direct_sum(p, m);
                        let n = lat.rank();
                        out.push((
                            format!("C{p} ({a},{b},{c}) k={k}"),
                            lattice_group(p, k, vec![lat.action.clone()], n),
                        ));
                        let seed = u64::from(a + 7 * b + 49 * c + 343 * k) + p;
                        let moved = lat.change_basis(seed);
                        out.push((
                            format!("C{p} ({a},{b},{c}) k={k} rebased"),
                            lattice_group(p, k, vec![moved.action], n),
                        ));
                    }
                }
            }
        }
        let aug = CyclicLattice::augmentation(3);
        let free = CyclicLattice::free(3);
        let products: Vec<(&str, Vec<CyclicLattice>)> = vec![
            ("C3xC3 on Z[z]+Z[z]", vec![aug.clone(), aug.clone()]),
            ("C3xC3 on Z[z]+ZC3", vec![aug.clone(), free.clone()]),
            ("C3xC3 on ZC3+ZC3", vec![free.clone(), free.clone()]),
            (
                "C3^3 on Z[z]^3",
                vec![aug.clone(), aug.clone(), aug.clone()],
            ),
        ];
        for (label, blocks) in products {
            let n = blocks.iter().map(CyclicLattice::rank).sum();
            out.push((
                format!("{label} k={k}"),
                lattice_group(3, k, independent_blocks(&blocks), n),
            ));
        }
        let padded = vec![aug.clone(), aug.clone(), CyclicLattice::trivial(3, 2)];
        let gens = independent_blocks(&padded)[..2].to_vec();
        out.push((
            format!("C3xC3 on Z[z]+Z[z]+Z^2 k={k}"),
            lattice_group(3, k, gens, 6),
        ));
        let phi9 = CyclicLattice::from_rows(3, &companion_rows(&[1, 0, 0, 1, 0, 0]));
        out.push((
            format!("C9 on Z[z9] k={k}"),
            lattice_group(3, k, vec![phi9.action], 6),
        ));
        out.push((
            format!("C3 wr C3 on Z[z]^3 k={k}"),
            lattice_group(3, k, wreath_monomial(3), 6),
        ));
        out.push((
            format!("trivial on Z k={k}"),
            lattice_group(5, k, Vec::new(), 1),
        ));
    }
    out
}

#[cfg(test)]
mod tests;
