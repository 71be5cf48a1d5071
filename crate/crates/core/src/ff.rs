//! Just enough arithmetic in `F_p[x]` and `F_{p^m}` to realise cyclic
//! subgroups of `GL_m(F_p)` as companion matrices.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::arith::{inv_mod, mul_mod};
use crate::matrix::Matrix;

/// Polynomial over `F_p`, coefficients low degree first, no trailing zeros.
pub type Poly = Vec<u64>;

fn trim(mut a: Poly) -> Poly {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

pub(crate) fn poly_mul(a: &[u64], b: &[u64], p: u64) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + mul_mod(x, y, p)) % p;
        }
    }
    trim(out)
}

pub(crate) fn poly_rem(a: &[u64], f: &[u64], p: u64) -> Poly {
    let mut r = trim(a.to_vec());
    let df = f.len() - 1;
    let lead_inv = inv_mod(f[df], p).expect("nonzero leading coefficient");
    while r.len() > df {
        let shift = r.len() - 1 - df;
        let c = mul_mod(*r.last().unwrap(), lead_inv, p);
        for (i, &fi) in f.iter().enumerate() {
            r[shift + i] = (r[shift + i] + p - mul_mod(c, fi, p)) % p;
        }
        r = trim(r);
    }
    r
}

pub(crate) fn poly_sub(a: &[u64], b: &[u64], p: u64) -> Poly {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    trim(out)
}

pub(crate) fn poly_gcd(a: &[u64], b: &[u64], p: u64) -> Poly {
    let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
    while !b.is_empty() {
        let r = poly_rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

pub(crate) fn poly_powmod(base: &[u64], mut e: u128, f: &[u64], p: u64) -> Poly {
    let mut acc: Poly = vec![1];
    let mut b = poly_rem(base, f, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_rem(&poly_mul(&acc, &b, p), f, p);
        }
        b = poly_rem(&poly_mul(&b, &b, p), f, p);
        e >>= 1;
    }
    acc
}

/// Rabin-style test: `f` has no factor of degree `<= deg f / 2`.
pub fn is_irreducible(f: &[u64], p: u64) -> bool {
    let n = f.len() - 1;
    if n == 0 {
        return false;
    }
    let x: Poly = vec![0, 1];
    let mut xp = x.clone();
    for _ in 0..n / 2 {
        xp = poly_powmod(&xp, p as u128, f, p);
        let g = poly_gcd(f, &poly_sub(&xp, &x, p), p);
        if g.len() > 1 {
            return false;
        }
    }
    true
}

fn poly_div_exact(a: &[u64], f: &[u64], p: u64) -> Poly {
    let mut r = trim(a.to_vec());
    let df = f.len() - 1;
    let lead_inv = inv_mod(f[df], p).expect("nonzero leading coefficient");
    let mut q = vec![0u64; r.len().saturating_sub(df)];
    while r.len() > df {
        let shift = r.len() - 1 - df;
        let c = mul_mod(*r.last().unwrap(), lead_inv, p);
        q[shift] = c;
        for (i, &fi) in f.iter().enumerate() {
            r[shift + i] = (r[shift + i] + p - mul_mod(c, fi, p)) % p;
        }
        r = trim(r);
    }
    debug_assert!(r.is_empty(), "division must be exact");
    trim(q)
}

fn make_monic(f: Poly, p: u64) -> Poly {
    let lead = *f.last().expect("nonzero polynomial");
    let inv = inv_mod(lead, p).expect("unit leading coefficient");
    f.into_iter().map(|c| mul_mod(c, inv, p)).collect()
}

/// The distinct monic irreducible factors of `f` over `F_p`, by degree and
/// then lexicographically on coefficients (high degree first).
///
/// `gcd(f, x^(p^d) - x)` collects the factors of degree dividing `d`; the
/// degree-`d` part is then split by trial division when it holds several.
pub fn irreducible_factors(f: &[u64], p: u64) -> Vec<Poly> {
    let f = make_monic(trim(f.iter().map(|c| c % p).collect()), p);
    let n = f.len() - 1;
    let x: Poly = vec![0, 1];
    let mut found: Vec<Poly> = Vec::new();
    let mut xp = x.clone();
    for d in 1..=n {
        xp = poly_powmod(&xp, p as u128, &f, p);
        let mut g = make_monic(poly_gcd(&f, &poly_sub(&xp, &x, p), p), p);
        for h in &found {
            if poly_rem(&g, h, p).is_empty() {
                g = poly_div_exact(&g, h, p);
            }
        }
        let deg = g.len() - 1;
        if deg == 0 {
            continue;
        }
        if deg == d {
            found.push(g);
            continue;
        }
        let mut parts = Vec::new();
        let mut cand: Poly = vec![0; d + 1];
        cand[d] = 1;
        loop {
            if poly_rem(&g, &cand, p).is_empty() {
                parts.push(cand.clone());
                if parts.len() * d == deg {
                    break;
                }
            }
            // next monic candidate of degree d
            let mut i = 0;
            while i < d {
                cand[i] = (cand[i] + 1) % p;
                if cand[i] != 0 {
                    break;
                }
                i += 1;
            }
            if i == d {
                break;
            }
        }
        found.extend(parts);
    }
    found.sort_by(|a, b| {
        a.len()
            .cmp(&b.len())
            .then_with(|| a.iter().rev().cmp(b.iter().rev()))
    });
    found
}

/// Characteristic polynomial of a square matrix over `F_p` (Hessenberg
/// reduction followed by the standard recurrence).
pub fn char_poly(m: &Matrix, p: u64) -> Poly {
    let n = m.dim();
    let mut a: Vec<Vec<u64>> = (0..n)
        .map(|i| (0..n).map(|j| m.get(i, j) % p).collect())
        .collect();
    for j in 0..n.saturating_sub(2) {
        let Some(piv) = (j + 1..n).find(|&i| a[i][j] != 0) else {
            continue;
        };
        a.swap(piv, j + 1);
        for row in a.iter_mut() {
            row.swap(piv, j + 1);
        }
        let inv = inv_mod(a[j + 1][j], p).expect("nonzero pivot");
        for r in j + 2..n {
            let f = mul_mod(a[r][j], inv, p);
            if f == 0 {
                continue;
            }
            for c in 0..n {
                let sub = mul_mod(f, a[j + 1][c], p);
                a[r][c] = (a[r][c] + p - sub) % p;
            }
            for row in a.iter_mut() {
                let add = mul_mod(f, row[r], p);
                row[j + 1] = (row[j + 1] + add) % p;
            }
        }
    }
    let mut polys: Vec<Poly> = vec![vec![1]];
    for k in 1..=n {
        let lin = vec![(p - a[k - 1][k - 1]) % p, 1];
        let mut pk = poly_mul(&lin, &polys[k - 1], p);
        let mut prod = 1u64;
        for i in 1..k {
            prod = mul_mod(prod, a[k - i][k - i - 1], p);
            let coeff = mul_mod(a[k - 1 - i][k - 1], prod, p);
            if coeff != 0 {
                let term: Poly = polys[k - 1 - i]
                    .iter()
                    .map(|&c| mul_mod(c, coeff, p))
                    .collect();
                pk = poly_sub(&pk, &term, p);
            }
        }
        polys.push(pk);
    }
    polys.pop().unwrap()
}

/// Evaluate `f(m)` over `Z/q`; coefficients are taken as residues mod `q`.
pub fn eval_matrix_poly(f: &[u64], m: &Matrix, q: u64) -> Matrix {
    let n = m.dim();
    let mut acc = Matrix(vec![0; n * n]);
    for &c in f.iter().rev() {
        acc = acc.mul(m, q);
        for i in 0..n {
            let v = (acc.get(i, i) + c % q) % q;
            acc.set(i, i, v);
        }
    }
    acc
}

/// Companion matrix (row-vector convention) of an element of exact order
/// `order` in `F_{p^m}^*`, where `order | p^m - 1` and the element generates
/// `F_{p^m}` over `F_p`.
///
/// `F_{p^m}` is modelled as `F_p[x]/(f)` for a random irreducible `f`; both
/// `f` and the element are drawn from a fixed-seed generator.
pub fn cyclic_block(p: u64, m: u32, order: u64, seed: u64) -> Matrix {
    let m = m as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let f: Poly = if m == 1 {
        vec![0, 1]
    } else {
        loop {
            let mut f: Poly = (0..m).map(|_| rng.gen_range(0..p)).collect();
            f.push(1);
            if is_irreducible(&f, p) {
                break f;
            }
        }
    };
    let group_order = (p as u128).pow(m as u32) - 1;
    assert_eq!(group_order % order as u128, 0, "order must divide p^m - 1");
    let cofactor = group_order / order as u128;
    let beta = loop {
        let alpha: Poly = trim((0..m).map(|_| rng.gen_range(0..p)).collect());
        if alpha.is_empty() {
            continue;
        }
        let beta = poly_powmod(&alpha, cofactor, &f, p);
        if has_exact_order(&beta, order, &f, p) {
            break beta;
        }
    };
    companion_of_min_poly(&beta, m, &f, p)
}

fn has_exact_order(beta: &[u64], order: u64, f: &[u64], p: u64) -> bool {
    if poly_powmod(beta, order as u128, f, p) != vec![1] {
        return false;
    }
    let primes = crate::arith::prime_divisors(&num_bigint::BigUint::from(order));
    primes
        .iter()
        .all(|&q| poly_powmod(beta, (order / q) as u128, f, p) != vec![1])
}

/// Minimal polynomial of `beta` by solving for `beta^m` in the basis
/// `1, beta, .., beta^(m-1)`, returned as its companion matrix.
fn companion_of_min_poly(beta: &[u64], m: usize, f: &[u64], p: u64) -> Matrix {
    let coords =
        |a: &Poly| -> Vec<u64> { (0..m).map(|i| a.get(i).copied().unwrap_or(0)).collect() };
    let mut powers: Vec<Poly> = vec![vec![1]];
    for _ in 0..m {
        let next = poly_rem(&poly_mul(powers.last().unwrap(), beta, p), f, p);
        powers.push(next);
    }
    // Solve c * B = coords(beta^m), rows of B = coords(beta^i).
    let rows: Vec<Vec<u64>> = powers[..m].iter().map(coords).collect();
    let target = coords(&powers[m]);
    let c = solve_left(&rows, &target, p).expect("powers of a field generator are independent");
    let mut comp = Matrix(vec![0; m * m]);
    for i in 0..m - 1 {
        comp.set(i, i + 1, 1);
    }
    for (j, &cj) in c.iter().enumerate() {
        comp.set(m - 1, j, cj);
    }
    comp
}

/// Solve `x * A = b` over `F_p` for square invertible `A` (given by rows).
fn solve_left(rows: &[Vec<u64>], b: &[u64], p: u64) -> Option<Vec<u64>> {
    let n = rows.len();
    // Transpose: A^T x^T = b^T, Gaussian elimination on augmented matrix.
    let mut aug: Vec<Vec<u64>> = (0..n)
        .map(|j| {
            let mut r: Vec<u64> = (0..n).map(|i| rows[i][j] % p).collect();
            r.push(b[j] % p);
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| aug[r][col] != 0)?;
        aug.swap(col, piv);
        let inv = inv_mod(aug[col][col], p)?;
        for x in aug[col].iter_mut() {
            *x = mul_mod(*x, inv, p);
        }
        for r in 0..n {
            if r != col && aug[r][col] != 0 {
                let factor = aug[r][col];
                for k in 0..=n {
                    let sub = mul_mod(factor, aug[col][k], p);
                    aug[r][k] = (aug[r][k] + p - sub) % p;
                }
            }
        }
    }
    Some(aug.iter().map(|r| r[n]).collect())
}

/// Element of exact order `order` in `(Z/q)^*`, least such residue.
pub fn unit_of_order(order: u64, q: u64) -> Option<u64> {
    (1..q).find(|&u| crate::arith::unit_order(u, q) == Some(order))
}

/// Element of exact order `2^c` in `F_p[i]/(i^2 + 1)` for `p = 3 mod 4`,
/// returned as `(u, v)` meaning `u + v i`.
pub fn gaussian_root_of_unity(p: u64, c: u32, seed: u64) -> (u64, u64) {
    let f: Poly = vec![1, 0, 1];
    let order = 1u64 << c;
    let cofactor = ((p as u128) * (p as u128) - 1) / order as u128;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let alpha: Poly = trim(vec![rng.gen_range(0..p), rng.gen_range(0..p)]);
        if alpha.is_empty() {
            continue;
        }
        let beta = poly_powmod(&alpha, cofactor, &f, p);
        if has_exact_order(&beta, order, &f, p) {
            return (
                beta.first().copied().unwrap_or(0),
                beta.get(1).copied().unwrap_or(0),
            );
        }
    }
}
