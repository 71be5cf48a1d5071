//! Builders for the concrete groups: cyclic, semidihedral, wreath products,
//! Sylow subgroups of symmetric and general linear groups, and the small
//! example groups `S`, `C_m ⋉ (Z/p^k)^d` and the dihedral models.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{self, ArithError};
use crate::ff;
use crate::matrix::{index_vector, vector_index, Matrix, MatrixGroupSpec};
use crate::perm::{GroupSpec, Perm, PermError};

/// Default cap on the number of points for [`matrix_to_perm`].
pub const DEFAULT_POINT_CAP: u64 = 59_049; // 3^10

const BLOCK_SEED: u64 = 0x5eed_b10c;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructionError {
    #[error("invalid parameter: {0}")]
    Domain(String),
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error("action on {points} points exceeds the cap of {cap}")]
    CapExceeded { points: u64, cap: u64 },
    #[error("relation check failed: {0}")]
    Relation(String),
    #[error(transparent)]
    Perm(#[from] PermError),
}

fn domain(msg: impl Into<String>) -> ConstructionError {
    ConstructionError::Domain(msg.into())
}

/// Regular representation of `C_n`.
pub fn cyclic(n: u64) -> Result<GroupSpec, ConstructionError> {
    if n == 0 {
        return Err(domain("cyclic group order must be at least 1"));
    }
    let n = n as usize;
    let gens = if n == 1 {
        Vec::new()
    } else {
        vec![Perm::from_images_unchecked(
            (0..n as u32).map(|i| (i + 1) % n as u32).collect(),
        )]
    };
    Ok(GroupSpec::new(n, gens)?)
}

/// `SD_{2^(c+1)} = <x, y | x^2 = y^(2^c) = 1, y^x = y^-(1 + 2^(c-1))>` in its
/// right regular representation. Element `x^e y^j` is point `e * 2^c + j`;
/// the returned generators are `[x, y]`.
pub fn semidihedral(c: u32) -> Result<GroupSpec, ConstructionError> {
    if c < 3 {
        return Err(domain(format!("semidihedral needs c >= 3, got {c}")));
    }
    let n = 1u64 << c;
    let s = (n - (1 + n / 2)) % n; // y^x = y^s
                                   // (x^e1 y^j1)(x^e2 y^j2) = x^(e1+e2) y^(j1 s^e2 + j2)
    let mul = |(e1, j1): (u64, u64), (e2, j2): (u64, u64)| -> (u64, u64) {
        let twist = if e2 == 1 { s } else { 1 };
        ((e1 + e2) % 2, (j1 * twist + j2) % n)
    };
    let point = |(e, j): (u64, u64)| (e * n + j) as u32;
    let regular = |g: (u64, u64)| -> Perm {
        let images = (0..2 * n).map(|u| point(mul((u / n, u % n), g))).collect();
        Perm::from_images_unchecked(images)
    };
    let x = regular((1, 0));
    let y = regular((0, 1));
    Ok(GroupSpec::new(2 * n as usize, vec![x, y])?)
}

/// Permutational wreath product `base ≀ top`: `top` permutes `t` blocks of
/// `deg(base)` points; every block carries its own copy of the base
/// generators.
pub fn wreath(base: &GroupSpec, top: &GroupSpec) -> GroupSpec {
    let m = base.degree;
    let t = top.degree;
    let degree = m * t;
    let mut gens = Vec::new();
    for block in 0..t {
        for g in &base.generators {
            gens.push(g.shifted(block * m, degree));
        }
    }
    for h in &top.generators {
        let images = (0..degree)
            .map(|x| (h.apply((x / m) as u32) as usize * m + x % m) as u32)
            .collect();
        gens.push(Perm::from_images_unchecked(images));
    }
    GroupSpec::trivial(degree).with_generators(gens)
}

/// `W_r(ell)` on `ell^r` points with `r` generators: generator `k` cycles
/// the `ell` sub-blocks of size `ell^(k-1)` inside the first block of size
/// `ell^k`.
pub fn iterated_wreath(ell: u64, r: u32) -> Result<GroupSpec, ConstructionError> {
    if ell < 2 {
        return Err(domain("wreath base must be at least 2"));
    }
    let degree = ell.pow(r) as usize;
    let mut gens = Vec::new();
    for k in 1..=r {
        let sub = ell.pow(k - 1) as usize;
        let span = sub * ell as usize;
        let images = (0..degree)
            .map(|x| {
                if x < span {
                    ((x + sub) % span) as u32
                } else {
                    x as u32
                }
            })
            .collect();
        gens.push(Perm::from_images_unchecked(images));
    }
    Ok(GroupSpec::new(degree, gens)?)
}

/// `X_{a,r}(ell) = C_{ell^a} ≀ W_r(ell)`.
pub fn xgroup(ell: u64, a: u32, r: u32) -> Result<GroupSpec, ConstructionError> {
    if a < 1 {
        return Err(domain("xgroup needs a >= 1"));
    }
    Ok(wreath(&cyclic(ell.pow(a))?, &iterated_wreath(ell, r)?))
}

/// `Y_{c,r} = SD_{2^(c+1)} ≀ W_r(2)`.
pub fn ygroup(c: u32, r: u32) -> Result<GroupSpec, ConstructionError> {
    Ok(wreath(&semidihedral(c)?, &iterated_wreath(2, r)?))
}

/// A Sylow `ell`-subgroup of `Sym(n)`: `W_i(ell)^(n_i)` blocks in increasing
/// `i`, the `n_0` fixed points first.
pub fn sylow_sym(n: u64, ell: u64) -> Result<GroupSpec, ConstructionError> {
    if !arith::is_prime(ell) {
        return Err(ArithError::NotPrime(ell).into());
    }
    let degree = n.max(1) as usize;
    let mut gens = Vec::new();
    let mut offset = 0usize;
    for (i, &count) in arith::ladic_expansion(n, ell).iter().enumerate() {
        let w = iterated_wreath(ell, i as u32)?;
        for _ in 0..count {
            gens.extend(w.generators.iter().map(|g| g.shifted(offset, degree)));
            offset += w.degree;
        }
    }
    Ok(GroupSpec::new(degree, gens)?)
}

/// `Sym(n)` generated by a transposition and an `n`-cycle.
pub fn symmetric(n: u64) -> Result<GroupSpec, ConstructionError> {
    if n == 0 {
        return Err(domain("symmetric group degree must be positive"));
    }
    let n = n as usize;
    let mut gens = Vec::new();
    if n >= 2 {
        gens.push(Perm::from_cycles(n, &[&[0, 1]])?);
    }
    if n >= 3 {
        let cycle: Vec<u32> = (0..n as u32).collect();
        gens.push(Perm::from_cycles(n, &[&cycle])?);
    }
    Ok(GroupSpec::new(n, gens)?)
}

/// `C_2 ⋉ Z/2^k`, the dihedral group of order `2^(k+1)` on `2^k` points.
pub fn dihedral_model(k: u32) -> Result<GroupSpec, ConstructionError> {
    if k < 2 {
        return Err(domain("dihedral model needs k >= 2"));
    }
    let n = 1u32 << k;
    let rotation = Perm::from_images_unchecked((0..n).map(|i| (i + 1) % n).collect());
    let reflection = Perm::from_images_unchecked((0..n).map(|i| (n - i) % n).collect());
    Ok(GroupSpec::new(n as usize, vec![rotation, reflection])?)
}

/// `n`-fold direct power on the disjoint union of domains.
pub fn direct_power(base: &GroupSpec, count: u32) -> GroupSpec {
    if count == 0 {
        return GroupSpec::trivial(1);
    }
    let mut acc = base.clone();
    for _ in 1..count {
        acc = acc.direct_product(base);
    }
    acc.name = None;
    acc.descriptor = None;
    acc
}

/// Explicit Sylow `ell`-subgroup of `GL_d(F_p)`.
///
/// Cyclic blocks of size `m(p, ell)` carry an element of order `ell^a`
/// (companion matrix). For `ell = 2` and `p = 3 mod 4` the blocks are
/// `2 x 2` semidihedral groups, with an extra `-1` on the last coordinate
/// when `d` is odd. Block permutations come from [`sylow_sym`].
pub fn gl_sylow_matrix(d: u32, p: u64, ell: u64) -> Result<MatrixGroupSpec, ConstructionError> {
    if !arith::is_prime(p) {
        return Err(ArithError::NotPrime(p).into());
    }
    if !arith::is_prime(ell) {
        return Err(ArithError::NotPrime(ell).into());
    }
    if p == 2 {
        return Err(domain("p must be odd"));
    }
    if ell == p {
        return Err(domain("ell must differ from p"));
    }
    if d == 0 {
        return Err(domain("dimension must be positive"));
    }
    let n = d as usize;
    let (blocks, block_size): (Vec<Matrix>, usize) = if ell == 2 && p % 4 == 3 {
        let c = arith::depth_c(p)?;
        let (x, y) = semidihedral_matrices(p, c)?;
        (vec![x, y], 2)
    } else {
        let m = arith::mult_order(p, ell)?;
        let a = arith::depth_a(p, ell)?;
        (
            vec![ff::cyclic_block(p, m, ell.pow(a), BLOCK_SEED)],
            m as usize,
        )
    };
    let count = n / block_size;
    let mut gens = Vec::new();
    for b in 0..count {
        for blk in &blocks {
            gens.push(blk.embed(b * block_size, n));
        }
    }
    if count > 0 {
        let top = sylow_sym(count as u64, ell)?;
        for g in &top.generators {
            let mut images: Vec<u32> = (0..n as u32).collect();
            for b in 0..count {
                let target = g.apply(b as u32) as usize;
                for i in 0..block_size {
                    images[b * block_size + i] = (target * block_size + i) as u32;
                }
            }
            gens.push(Matrix::permutation(&images));
        }
    }
    if ell == 2 && p % 4 == 3 && n % 2 == 1 {
        let mut diag = vec![1u64; n];
        diag[n - 1] = p - 1;
        gens.push(Matrix::diagonal(&diag));
    }
    Ok(MatrixGroupSpec {
        d: n,
        modulus: p,
        generators: gens,
    })
}

/// `(x, y)` realising `SD_{2^(c+1)}` in `GL_2(F_p)`, `p = 3 mod 4`: `y` is
/// multiplication by a primitive `2^c`-th root of unity in
/// `F_p[i]/(i^2 + 1)` and `x` is the Frobenius `i -> -i`.
pub fn semidihedral_matrices(p: u64, c: u32) -> Result<(Matrix, Matrix), ConstructionError> {
    let (u, v) = ff::gaussian_root_of_unity(p, c, BLOCK_SEED);
    let y = Matrix(vec![u, v, (p - v) % p, u]);
    let x = Matrix::diagonal(&[1, p - 1]);
    check_semidihedral(&x, &y, c, p)?;
    Ok((x, y))
}

/// Verify `x^2 = y^(2^c) = 1` and `x^-1 y x = y^-(1 + 2^(c-1))`.
pub fn check_semidihedral(x: &Matrix, y: &Matrix, c: u32, p: u64) -> Result<(), ConstructionError> {
    let id = Matrix::identity(x.dim());
    let n = 1u64 << c;
    if x.pow(2, p) != id {
        return Err(ConstructionError::Relation("x^2 != 1".into()));
    }
    if y.pow(n, p) != id || y.pow(n / 2, p) == id {
        return Err(ConstructionError::Relation(format!(
            "y does not have order 2^{c}"
        )));
    }
    let lhs = x.mul(y, p).mul(x, p); // x^-1 = x
    let rhs = y.pow(n - (1 + n / 2), p);
    if lhs != rhs {
        return Err(ConstructionError::Relation("y^x != y^-(1+2^(c-1))".into()));
    }
    Ok(())
}

/// Faithful action on all `modulus^d` row vectors; point `i` is the vector
/// whose base-`modulus` digits (least significant first) are the coordinates.
pub fn matrix_to_perm(m: &MatrixGroupSpec, cap: u64) -> Result<GroupSpec, ConstructionError> {
    let points = (m.modulus as u128).pow(m.d as u32);
    if points > cap as u128 {
        return Err(ConstructionError::CapExceeded {
            points: points.min(u64::MAX as u128) as u64,
            cap,
        });
    }
    let points = points as u64;
    let gens = m
        .generators
        .iter()
        .map(|g| {
            let images = (0..points)
                .map(|i| {
                    let v = index_vector(i, m.modulus, m.d);
                    vector_index(&g.apply_row(&v, m.modulus), m.modulus) as u32
                })
                .collect();
            Perm::new(images)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(GroupSpec::new(points as usize, gens)?)
}

/// Faithful action on the union of the orbits of the standard basis
/// vectors, for groups whose full module is too large to enumerate. Points
/// are the orbit vectors in lexicographic order.
pub fn matrix_orbit_perm(m: &MatrixGroupSpec, cap: u64) -> Result<GroupSpec, ConstructionError> {
    let mut seen = std::collections::BTreeSet::new();
    let mut stack: Vec<Vec<u64>> = (0..m.d)
        .map(|i| {
            let mut e = vec![0u64; m.d];
            e[i] = 1 % m.modulus;
            e
        })
        .collect();
    while let Some(v) = stack.pop() {
        if !seen.insert(v.clone()) {
            continue;
        }
        if seen.len() as u64 > cap {
            return Err(ConstructionError::CapExceeded {
                points: seen.len() as u64,
                cap,
            });
        }
        for g in &m.generators {
            let w = g.apply_row(&v, m.modulus);
            if !seen.contains(&w) {
                stack.push(w);
            }
        }
    }
    let points: Vec<Vec<u64>> = seen.into_iter().collect();
    let lookup: std::collections::HashMap<&Vec<u64>, u32> = points
        .iter()
        .enumerate()
        .map(|(i, v)| (v, i as u32))
        .collect();
    let gens = m
        .generators
        .iter()
        .map(|g| {
            let images = points
                .iter()
                .map(|v| lookup[&g.apply_row(v, m.modulus)])
                .collect();
            Perm::new(images)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(GroupSpec::new(points.len().max(1), gens)?)
}

/// The order-16 group `S <= GL_2(Z/p)` generated by the swap, the scalar
/// `sqrt(-1)` (least residue) and `diag(-1, 1)`.
pub fn swap_scalar_group(p: u64) -> Result<MatrixGroupSpec, ConstructionError> {
    let i = arith::sqrt_minus_one(p)?;
    Ok(MatrixGroupSpec {
        d: 2,
        modulus: p,
        generators: vec![
            Matrix(vec![0, 1, 1, 0]),
            Matrix::diagonal(&[i, i]),
            Matrix::diagonal(&[p - 1, 1]),
        ],
    })
}

/// True if some line of `F_p^2` is fixed by every generator.
pub fn has_common_invariant_line(m: &MatrixGroupSpec) -> bool {
    assert_eq!(m.d, 2, "line check is for degree-2 groups");
    let p = m.modulus;
    let lines = (0..p)
        .map(|t| vec![1, t])
        .chain(std::iter::once(vec![0, 1]));
    lines.into_iter().any(|v| {
        m.generators.iter().all(|g| {
            let w = g.apply_row(&v, p);
            // w parallel to v
            (w[0] * v[1] % p + p - w[1] * v[0] % p) % p == 0
        })
    })
}

/// `C_m ⋉ (Z/p^k)^d` acting by affine maps `v -> lambda v + t` on the
/// `p^(kd)` vectors, with `lambda` the least unit of order `m`.
pub fn affine_extension(p: u64, m: u64, d: u32, k: u32) -> Result<GroupSpec, ConstructionError> {
    if !arith::is_prime(p) {
        return Err(ArithError::NotPrime(p).into());
    }
    if m == 1 || m == 0 || (p - 1) % m != 0 {
        return Err(domain(format!(
            "m = {m} must be a divisor of p - 1 other than 1"
        )));
    }
    if k == 0 || d == 0 {
        return Err(domain("k and d must be positive"));
    }
    let q = p.pow(k);
    let points = (q as u128).pow(d);
    if points > DEFAULT_POINT_CAP as u128 {
        return Err(ConstructionError::CapExceeded {
            points: points as u64,
            cap: DEFAULT_POINT_CAP,
        });
    }
    let lambda = ff::unit_of_order(m, q).ok_or_else(|| domain("no unit of the requested order"))?;
    let n = points as u64;
    let d = d as usize;
    let affine = |scale: u64, shift: Option<usize>| -> Perm {
        let images = (0..n)
            .map(|i| {
                let mut v = index_vector(i, q, d);
                for x in v.iter_mut() {
                    *x = arith::mul_mod(*x, scale, q);
                }
                if let Some(j) = shift {
                    v[j] = (v[j] + 1) % q;
                }
                vector_index(&v, q) as u32
            })
            .collect();
        Perm::from_images_unchecked(images)
    };
    let mut gens = vec![affine(lambda, None)];
    for j in 0..d {
        gens.push(affine(1, Some(j)));
    }
    Ok(GroupSpec::new(n as usize, gens)?)
}

/// `GL_d(F_p)` generated by `diag(w, 1, .., 1)` for a primitive root `w`
/// and the elementary transvections.
pub fn general_linear(d: u32, p: u64) -> Result<MatrixGroupSpec, ConstructionError> {
    if !arith::is_prime(p) {
        return Err(ArithError::NotPrime(p).into());
    }
    let n = d as usize;
    let w = ff::unit_of_order(p - 1, p).unwrap_or(1);
    let mut gens = Vec::new();
    if w != 1 {
        let mut diag = vec![1u64; n];
        diag[0] = w;
        gens.push(Matrix::diagonal(&diag));
    }
    for i in 0..n {
        for j in 0..n {
            if i != j {
                let mut t = Matrix::identity(n);
                t.set(i, j, 1);
                gens.push(t);
            }
        }
    }
    Ok(MatrixGroupSpec {
        d: n,
        modulus: p,
        generators: gens,
    })
}

/// Upper unitriangular `3 x 3` matrices over `F_p` (Heisenberg group).
pub fn heisenberg(p: u64) -> Result<MatrixGroupSpec, ConstructionError> {
    if !arith::is_prime(p) {
        return Err(ArithError::NotPrime(p).into());
    }
    let mut a = Matrix::identity(3);
    a.set(0, 1, 1);
    let mut b = Matrix::identity(3);
    b.set(1, 2, 1);
    Ok(MatrixGroupSpec {
        d: 3,
        modulus: p,
        generators: vec![a, b],
    })
}

/// Builder name and parameters, embedded in group files so formula
/// dispatch can recognise the construction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "builder", rename_all = "kebab-case")]
pub enum Descriptor {
    Cyclic {
        n: u64,
    },
    Semidihedral {
        c: u32,
    },
    IteratedWreath {
        l: u64,
        r: u32,
    },
    Xgroup {
        l: u64,
        a: u32,
        r: u32,
    },
    Ygroup {
        c: u32,
        r: u32,
    },
    SylowSym {
        n: u64,
        l: u64,
    },
    GlSylow {
        d: u32,
        p: u64,
        l: u64,
    },
    #[serde(rename = "remark-s")]
    SwapScalar {
        p: u64,
    },
    #[serde(rename = "remark-affine")]
    AffineExtension {
        p: u64,
        m: u64,
        d: u32,
        k: u32,
    },
    Dihedral {
        k: u32,
    },
    DihedralPower {
        k: u32,
        count: u32,
    },
    Symmetric {
        n: u64,
    },
    GeneralLinear {
        d: u32,
        p: u64,
    },
    Heisenberg {
        p: u64,
    },
}

impl Descriptor {
    /// Human-readable label such as `X_{2,1}(2)`.
    pub fn label(&self) -> String {
        match self {
            Descriptor::Cyclic { n } => format!("C_{n}"),
            Descriptor::Semidihedral { c } => format!("SD_{}", 1u64 << (c + 1)),
            Descriptor::IteratedWreath { l, r } => format!("W_{r}({l})"),
            Descriptor::Xgroup { l, a, r } => format!("X_{{{a},{r}}}({l})"),
            Descriptor::Ygroup { c, r } => format!("Y_{{{c},{r}}}"),
            Descriptor::SylowSym { n, l } => format!("Syl_{l}(Sym({n}))"),
            Descriptor::GlSylow { d, p, l } => format!("Syl_{l}(GL_{d}(F_{p}))"),
            Descriptor::SwapScalar { p } => format!("S(F_{p})"),
            Descriptor::AffineExtension { p, m, d, k } => {
                format!("C_{m} x| (Z/{p}^{k})^{d}")
            }
            Descriptor::Dihedral { k } => format!("D_{}", 1u64 << (k + 1)),
            Descriptor::DihedralPower { k, count } => {
                format!("D_{}^{count}", 1u64 << (k + 1))
            }
            Descriptor::Symmetric { n } => format!("Sym({n})"),
            Descriptor::GeneralLinear { d, p } => format!("GL_{d}(F_{p})"),
            Descriptor::Heisenberg { p } => format!("UT_3(F_{p})"),
        }
    }

    /// The matrix group behind a matrix construction, if any.
    pub fn matrix_group(&self) -> Option<Result<MatrixGroupSpec, ConstructionError>> {
        match *self {
            Descriptor::GlSylow { d, p, l } => Some(gl_sylow_matrix(d, p, l)),
            Descriptor::SwapScalar { p } => Some(swap_scalar_group(p)),
            Descriptor::GeneralLinear { d, p } => Some(general_linear(d, p)),
            Descriptor::Heisenberg { p } => Some(heisenberg(p)),
            _ => None,
        }
    }

    /// Build the permutation group, tagged with name and descriptor.
    pub fn build(&self) -> Result<GroupSpec, ConstructionError> {
        let spec = match *self {
            Descriptor::Cyclic { n } => cyclic(n)?,
            Descriptor::Semidihedral { c } => semidihedral(c)?,
            Descriptor::IteratedWreath { l, r } => iterated_wreath(l, r)?,
            Descriptor::Xgroup { l, a, r } => xgroup(l, a, r)?,
            Descriptor::Ygroup { c, r } => ygroup(c, r)?,
            Descriptor::SylowSym { n, l } => sylow_sym(n, l)?,
            Descriptor::AffineExtension { p, m, d, k } => affine_extension(p, m, d, k)?,
            Descriptor::Dihedral { k } => dihedral_model(k)?,
            Descriptor::DihedralPower { k, count } => direct_power(&dihedral_model(k)?, count),
            Descriptor::Symmetric { n } => symmetric(n)?,
            Descriptor::GlSylow { .. }
            | Descriptor::SwapScalar { .. }
            | Descriptor::GeneralLinear { .. }
            | Descriptor::Heisenberg { .. } => {
                let m = self.matrix_group().expect("matrix descriptor")?;
                matrix_to_perm(&m, DEFAULT_POINT_CAP)?
            }
        };
        Ok(spec.with_name(self.label()).with_descriptor(self.clone()))
    }
}

#[cfg(test)]
mod tests;
