//! Front-projection invariants, stabilization bookkeeping, and the rational
//! homotopy invariant d3 of a handle presentation.
//!
//! On a front, `tb = w - (c_u + c_d)/2` and `rot = (c_d - c_u)/2`. A
//! stabilization adds a zigzag: tb drops by one and the rotation number moves
//! by -1 (up cusp) or +1 (down cusp). To realize smooth framing `f` starting
//! from twisting `tb`, a component is stabilized `k = tb - (f + 1)` times,
//! leaving `k + 1` admissible rotation numbers `{-k, -k+2, ..., k}`.

use std::fmt;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Isotopy class of an encoded component: contained in a ball, or smoothly
/// isotopic to the product longitude of the splitting torus (whose twisting
/// is measured against the surface framing).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum KnotClass {
    Nullhomologous,
    Longitudinal,
}

/// Combinatorial front data of one link component.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrontDiagram {
    pub writhe: i64,
    pub cusps_up: u32,
    pub cusps_down: u32,
    pub class: KnotClass,
}

impl FrontDiagram {
    pub fn nullhomologous(writhe: i64, cusps_up: u32, cusps_down: u32) -> Self {
        FrontDiagram {
            writhe,
            cusps_up,
            cusps_down,
            class: KnotClass::Nullhomologous,
        }
    }

    pub fn longitudinal(writhe: i64, cusps_up: u32, cusps_down: u32) -> Self {
        FrontDiagram {
            writhe,
            cusps_up,
            cusps_down,
            class: KnotClass::Longitudinal,
        }
    }

    /// The minimal front of the unknot: one up cusp, one down cusp.
    pub fn standard_unknot() -> Self {
        FrontDiagram::nullhomologous(0, 1, 1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LegendrianInvariants {
    pub tb: i64,
    pub rot: i64,
}

/// tb and rotation number of a front.
pub fn invariants(front: &FrontDiagram) -> Result<LegendrianInvariants> {
    let total = front.cusps_up as i64 + front.cusps_down as i64;
    if total % 2 != 0 {
        return Err(Error::MalformedFront(total as usize));
    }
    if front.class == KnotClass::Nullhomologous && total < 2 {
        return Err(Error::usage(
            "a nullhomologous front has at least two cusps",
        ));
    }
    Ok(LegendrianInvariants {
        tb: front.writhe - total / 2,
        rot: (front.cusps_down as i64 - front.cusps_up as i64) / 2,
    })
}

/// Effect of `up` upward and `down` downward stabilizations.
pub fn stabilize(inv: LegendrianInvariants, up: u32, down: u32) -> LegendrianInvariants {
    LegendrianInvariants {
        tb: inv.tb - up as i64 - down as i64,
        rot: inv.rot + down as i64 - up as i64,
    }
}

/// One rotation number per 2-handle component.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RotationVector(pub Vec<i64>);

impl fmt::Display for RotationVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, r) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{r}")?;
        }
        Ok(())
    }
}

/// All rotation vectors realizable by stabilizing each component from its
/// initial tb down to its smooth framing plus one. Component `i` admits the
/// `k_i + 1` values `{-k_i, -k_i+2, ..., k_i}` where `k_i = tb_i - (f_i + 1)`;
/// the output is the full Cartesian product in lexicographic order.
pub fn enumerate_rotation_vectors(targets: &[(i64, i64)]) -> Result<Vec<RotationVector>> {
    let mut counts = Vec::with_capacity(targets.len());
    for (i, &(tb, framing)) in targets.iter().enumerate() {
        let k = tb - (framing + 1);
        if k < 0 {
            return Err(Error::CannotReachFraming {
                component: i,
                tb,
                framing,
            });
        }
        counts.push(k);
    }
    let mut out = Vec::new();
    let mut current = vec![0i64; counts.len()];
    fill(&counts, 0, &mut current, &mut out);
    Ok(out)
}

fn fill(counts: &[i64], i: usize, current: &mut Vec<i64>, out: &mut Vec<RotationVector>) {
    if i == counts.len() {
        out.push(RotationVector(current.clone()));
        return;
    }
    let k = counts[i];
    let mut r = -k;
    while r <= k {
        current[i] = r;
        fill(counts, i + 1, current, out);
        r += 2;
    }
}

/// The first-Chern-class cocycle of a stabilized handle attachment: its value
/// on the i-th 2-handle is the i-th rotation number.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ChernCochain(pub Vec<i64>);

pub fn chern_cochain(v: &RotationVector) -> ChernCochain {
    ChernCochain(v.0.clone())
}

impl ChernCochain {
    pub fn value_on_handle(&self, i: usize) -> i64 {
        self.0[i]
    }
}

/// Counts equivalence classes of Chern cochains modulo the integer span of
/// the coboundary vectors. With no coboundary this is the number of distinct
/// rotation vectors.
pub fn count_distinct_spinc(vectors: &[RotationVector], coboundary: &[Vec<i64>]) -> Result<usize> {
    if vectors.is_empty() {
        return Ok(0);
    }
    let n = vectors[0].0.len();
    if vectors.iter().any(|v| v.0.len() != n) {
        return Err(Error::usage("rotation vectors of mixed lengths"));
    }
    if coboundary.iter().any(|g| g.len() != n) {
        return Err(Error::usage("coboundary vector length mismatch"));
    }
    let basis = row_echelon_lattice_basis(coboundary.to_vec());
    let classes: std::collections::BTreeSet<Vec<i64>> = vectors
        .iter()
        .map(|v| reduce_mod_lattice(v.0.clone(), &basis))
        .collect();
    Ok(classes.len())
}

/// Integer row-echelon basis (positive pivots) of the lattice spanned by the
/// input rows, by Euclidean elimination.
#[allow(clippy::needless_range_loop)]
fn row_echelon_lattice_basis(mut rows: Vec<Vec<i64>>) -> Vec<Vec<i64>> {
    rows.retain(|r| r.iter().any(|&x| x != 0));
    if rows.is_empty() {
        return rows;
    }
    let ncols = rows[0].len();
    let mut top = 0;
    for col in 0..ncols {
        if top >= rows.len() {
            break;
        }
        loop {
            let pivot = (top..rows.len())
                .filter(|&i| rows[i][col] != 0)
                .min_by_key(|&i| rows[i][col].unsigned_abs());
            let Some(p) = pivot else { break };
            rows.swap(top, p);
            let mut done = true;
            for i in top + 1..rows.len() {
                if rows[i][col] != 0 {
                    let q = rows[i][col].div_euclid(rows[top][col]);
                    for c in 0..ncols {
                        rows[i][c] -= q * rows[top][c];
                    }
                    if rows[i][col] != 0 {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if rows[top][col] != 0 {
            if rows[top][col] < 0 {
                for c in 0..ncols {
                    rows[top][c] = -rows[top][c];
                }
            }
            top += 1;
        }
    }
    rows.truncate(top);
    rows
}

/// Canonical coset representative: each pivot coordinate is reduced into
/// `[0, pivot)`.
fn reduce_mod_lattice(mut v: Vec<i64>, basis: &[Vec<i64>]) -> Vec<i64> {
    for row in basis {
        let col = row.iter().position(|&x| x != 0).unwrap();
        let q = v[col].div_euclid(row[col]);
        if q != 0 {
            for c in 0..v.len() {
                v[c] -= q * row[c];
            }
        }
    }
    v
}

/// Handle presentation data entering d3: the symmetric linking matrix of the
/// 2-handles and the number of 1-handles.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FillingData {
    linking: Vec<Vec<i64>>,
    one_handles: usize,
}

impl FillingData {
    #[allow(clippy::needless_range_loop)]
    pub fn new(linking: Vec<Vec<i64>>, one_handles: usize) -> Result<Self> {
        let n = linking.len();
        if linking.iter().any(|row| row.len() != n) {
            return Err(Error::usage("linking matrix is not square"));
        }
        for i in 0..n {
            for j in 0..i {
                if linking[i][j] != linking[j][i] {
                    return Err(Error::usage("linking matrix is not symmetric"));
                }
            }
        }
        Ok(FillingData {
            linking,
            one_handles,
        })
    }

    pub fn linking(&self) -> &[Vec<i64>] {
        &self.linking
    }

    pub fn one_handles(&self) -> usize {
        self.one_handles
    }
}

type Rat = BigRational;

fn rat_int(x: i64) -> Rat {
    BigRational::from_integer(BigInt::from(x))
}

/// Solves `L x = v` exactly; `None` when `L` is singular.
#[allow(clippy::needless_range_loop)]
fn solve_exact(l: &[Vec<i64>], v: &[i64]) -> Option<Vec<Rat>> {
    let n = l.len();
    let mut m: Vec<Vec<Rat>> = l
        .iter()
        .zip(v)
        .map(|(row, &b)| {
            row.iter()
                .map(|&x| rat_int(x))
                .chain(std::iter::once(rat_int(b)))
                .collect()
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&i| !m[i][col].is_zero())?;
        m.swap(col, pivot);
        for i in 0..n {
            if i != col && !m[i][col].is_zero() {
                let f = &m[i][col] / &m[col][col];
                for c in col..=n {
                    let t = &f * &m[col][c];
                    m[i][c] -= t;
                }
            }
        }
    }
    Some((0..n).map(|i| &m[i][n] / &m[i][i]).collect())
}

/// Signature of an invertible symmetric integer matrix by exact congruence
/// diagonalization.
#[allow(clippy::needless_range_loop)]
fn signature_exact(l: &[Vec<i64>]) -> i64 {
    let n = l.len();
    let mut m: Vec<Vec<Rat>> = l
        .iter()
        .map(|row| row.iter().map(|&x| rat_int(x)).collect())
        .collect();
    let mut sig = 0i64;
    for k in 0..n {
        if m[k][k].is_zero() {
            if let Some(j) = (k + 1..n).find(|&j| !m[j][j].is_zero()) {
                // symmetric swap of rows/columns k and j
                m.swap(k, j);
                for row in m.iter_mut() {
                    row.swap(k, j);
                }
            } else if let Some(j) = (k + 1..n).find(|&j| !m[k][j].is_zero()) {
                // add row/column j into k to create a nonzero diagonal entry
                for c in 0..n {
                    let t = m[j][c].clone();
                    m[k][c] += t;
                }
                for r in 0..n {
                    let t = m[r][j].clone();
                    m[r][k] += t;
                }
            }
        }
        let d = m[k][k].clone();
        debug_assert!(!d.is_zero(), "zero pivot on an invertible matrix");
        sig += if d.is_positive() { 1 } else { -1 };
        for i in k + 1..n {
            if !m[i][k].is_zero() {
                let f = &m[i][k] / &d;
                for c in 0..n {
                    let t = &f * &m[k][c];
                    m[i][c] -= t;
                }
                for r in 0..n {
                    let t = &f * &m[r][k];
                    m[r][i] -= t;
                }
            }
        }
    }
    sig
}

/// The d3 invariant `(c^2 - 2*chi - 3*sigma) / 4` of the contact structure
/// presented by the handle data and rotation vector, with `c^2 = v^T L^{-1} v`
/// computed exactly.
pub fn d3(f: &FillingData, v: &RotationVector) -> Result<Rat> {
    let n = f.linking.len();
    if v.0.len() != n {
        return Err(Error::usage(format!(
            "rotation vector length {} does not match matrix size {n}",
            v.0.len()
        )));
    }
    let c_squared = if n == 0 {
        Rat::zero()
    } else {
        let x = solve_exact(&f.linking, &v.0).ok_or(Error::D3Undefined)?;
        v.0.iter().zip(&x).map(|(&vi, xi)| rat_int(vi) * xi).sum()
    };
    let chi = rat_int(1 - f.one_handles as i64 + n as i64);
    let sigma = if n == 0 {
        0
    } else {
        signature_exact(&f.linking)
    };
    let four = rat_int(4);
    Ok((c_squared - rat_int(2) * chi - rat_int(3) * rat_int(sigma)) / four)
}
