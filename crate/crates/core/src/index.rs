//! Multi-index arithmetic for γ-block matrices.
//!
//! A γ-block matrix of size `q = Π γ_i` is indexed through a *nesting* `Ω`,
//! a permutation of the dimension labels deciding which dimension varies
//! fastest. Slot `l` of a nesting holds dimension `Ω_l` and carries stride
//! `q_l = Π_{i<l} γ_{Ω_i}`, so a slot-ordered multi-index `(i_0, …, i_{d-1})`
//! maps to the flat index `Σ i_l q_l`.
//!
//! The identity nesting matches the sample stacking used to build
//! correlation matrices: dimension 0 varies fastest.

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;

/// Relative tolerance used when comparing entries for Toeplitz characters.
pub const CHARACTER_REL_TOL: f64 = 1e-10;
/// Absolute floor paired with [`CHARACTER_REL_TOL`].
pub const CHARACTER_ABS_TOL: f64 = 1e-12;

/// Per-dimension orders `γ_i` of a d-dimensional block structure.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DimSpec {
    gamma: Vec<usize>,
}

impl DimSpec {
    pub fn new(gamma: Vec<usize>) -> Result<Self> {
        if gamma.is_empty() {
            return Err(Error::InvalidSpec("at least one dimension is required".into()));
        }
        if let Some(pos) = gamma.iter().position(|&g| g == 0) {
            return Err(Error::InvalidSpec(format!("order of dimension {pos} must be >= 1")));
        }
        gamma
            .iter()
            .try_fold(1usize, |acc, &g| acc.checked_mul(g))
            .ok_or_else(|| Error::InvalidSpec("total size overflows".into()))?;
        Ok(Self { gamma })
    }

    pub fn d(&self) -> usize {
        self.gamma.len()
    }

    pub fn gamma(&self) -> &[usize] {
        &self.gamma
    }

    /// Total size `q = Π γ_i`.
    pub fn q(&self) -> usize {
        self.gamma.iter().product()
    }
}

/// A dimension nesting `Ω`: a permutation of `0..d`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Nesting {
    omega: Vec<usize>,
    inverse: Vec<usize>,
}

impl Nesting {
    pub fn new(omega: Vec<usize>) -> Result<Self> {
        let d = omega.len();
        let mut inverse = vec![usize::MAX; d];
        for (slot, &dim) in omega.iter().enumerate() {
            if dim >= d || inverse[dim] != usize::MAX {
                return Err(Error::InvalidNesting { omega, d });
            }
            inverse[dim] = slot;
        }
        Ok(Self { omega, inverse })
    }

    pub fn identity(d: usize) -> Self {
        Self {
            omega: (0..d).collect(),
            inverse: (0..d).collect(),
        }
    }

    pub fn d(&self) -> usize {
        self.omega.len()
    }

    /// Dimension label held by `slot` (`Ω_slot`).
    pub fn dim_at(&self, slot: usize) -> usize {
        self.omega[slot]
    }

    /// Slot holding dimension `dim` (`Ω^{-1}(dim)`).
    pub fn slot_of(&self, dim: usize) -> usize {
        self.inverse[dim]
    }

    pub fn omega(&self) -> &[usize] {
        &self.omega
    }

    fn check_for(&self, spec: &DimSpec) -> Result<()> {
        if self.d() != spec.d() {
            return Err(Error::InvalidNesting {
                omega: self.omega.clone(),
                d: spec.d(),
            });
        }
        Ok(())
    }
}

/// Slot strides `q_l^Ω` together with the slot extents `γ_{Ω_l}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Strides {
    strides: Vec<usize>,
    extents: Vec<usize>,
}

impl Strides {
    pub fn values(&self) -> &[usize] {
        &self.strides
    }

    pub fn extents(&self) -> &[usize] {
        &self.extents
    }

    /// Total size covered by the strides.
    pub fn total(&self) -> usize {
        match (self.strides.last(), self.extents.last()) {
            (Some(s), Some(e)) => s * e,
            _ => 1,
        }
    }
}

pub fn strides(spec: &DimSpec, nesting: &Nesting) -> Result<Strides> {
    nesting.check_for(spec)?;
    let extents: Vec<usize> = nesting.omega.iter().map(|&dim| spec.gamma[dim]).collect();
    let mut strides = Vec::with_capacity(extents.len());
    let mut acc = 1;
    for &e in &extents {
        strides.push(acc);
        acc *= e;
    }
    Ok(Strides { strides, extents })
}

pub fn flat_of_multi(multi: &[usize], strides: &Strides) -> Result<usize> {
    if multi.len() != strides.extents.len()
        || multi.iter().zip(&strides.extents).any(|(&i, &e)| i >= e)
    {
        return Err(Error::IndexOutOfRange {
            index: multi.to_vec(),
            extents: strides.extents.clone(),
        });
    }
    Ok(multi.iter().zip(&strides.strides).map(|(i, s)| i * s).sum())
}

pub fn multi_of_flat(flat: usize, strides: &Strides) -> Result<Vec<usize>> {
    if flat >= strides.total() {
        return Err(Error::IndexOutOfRange {
            index: vec![flat],
            extents: vec![strides.total()],
        });
    }
    let mut rest = flat;
    Ok(strides
        .extents
        .iter()
        .map(|&e| {
            let i = rest % e;
            rest /= e;
            i
        })
        .collect())
}

/// A bijection of `0..q`, stored as the image of each flat index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexPermutation {
    map: Vec<usize>,
}

impl IndexPermutation {
    pub fn new(map: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; map.len()];
        for &k in &map {
            if k >= map.len() || seen[k] {
                return Err(Error::InvalidSpec(format!("{map:?} is not a permutation")));
            }
            seen[k] = true;
        }
        Ok(Self { map })
    }

    pub fn identity(q: usize) -> Self {
        Self { map: (0..q).collect() }
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.map[i]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.map
    }

    /// `(self ∘ first)(i) = self(first(i))`.
    pub fn compose_after(&self, first: &IndexPermutation) -> IndexPermutation {
        IndexPermutation {
            map: first.map.iter().map(|&i| self.map[i]).collect(),
        }
    }

    pub fn inverse(&self) -> IndexPermutation {
        let mut inv = vec![0; self.map.len()];
        for (i, &k) in self.map.iter().enumerate() {
            inv[k] = i;
        }
        IndexPermutation { map: inv }
    }
}

/// The walking permutation `X^{Ω→Ω'}`: the flat index of an element under
/// `from` is sent to the flat index of the same element under `to`.
pub fn walking_map(spec: &DimSpec, from: &Nesting, to: &Nesting) -> Result<IndexPermutation> {
    let src = strides(spec, from)?;
    let dst = strides(spec, to)?;
    // Coefficient for source slot k moves to destination slot Ω'^{-1}(Ω_k).
    let moved: Vec<usize> = (0..spec.d())
        .map(|k| dst.strides[to.slot_of(from.dim_at(k))])
        .collect();
    let q = spec.q();
    let mut map = Vec::with_capacity(q);
    for flat in 0..q {
        let multi = multi_of_flat(flat, &src)?;
        map.push(multi.iter().zip(&moved).map(|(i, s)| i * s).sum());
    }
    Ok(IndexPermutation { map })
}

/// Scatters `m` through `perm`: the result `N` satisfies
/// `N[perm(i)][perm(j)] = M[i][j]`.
pub fn apply_walking(m: &ComplexMatrix, perm: &IndexPermutation) -> Result<ComplexMatrix> {
    if !m.is_square() || m.rows() != perm.len() {
        return Err(Error::SizeMismatch {
            expected: perm.len(),
            found: m.rows().max(m.cols()),
        });
    }
    let inv = perm.inverse();
    Ok(ComplexMatrix::from_fn(m.rows(), m.cols(), |i, j| {
        m[(inv.apply(i), inv.apply(j))]
    }))
}

fn entries_match(a: num_complex::Complex64, b: num_complex::Complex64) -> bool {
    let scale = a.norm().max(b.norm());
    (a - b).norm() <= (CHARACTER_REL_TOL * scale).max(CHARACTER_ABS_TOL)
}

/// Tests whether `m` has the `(γ, u, Ω)` Toeplitz character: every entry
/// equals the entry obtained by moving the slot-`u` difference `i_u - j_u`
/// entirely onto the row (when non-negative) or the column (otherwise).
pub fn has_character(m: &ComplexMatrix, spec: &DimSpec, u: usize, nesting: &Nesting) -> Result<bool> {
    let st = strides(spec, nesting)?;
    let q = spec.q();
    if !m.is_square() || m.rows() != q {
        return Err(Error::SizeMismatch {
            expected: q,
            found: m.rows().max(m.cols()),
        });
    }
    if u >= spec.d() {
        return Err(Error::IndexOutOfRange {
            index: vec![u],
            extents: vec![spec.d()],
        });
    }
    let stride = st.strides[u];
    let extent = st.extents[u];
    for i in 0..q {
        let iu = (i / stride) % extent;
        let i_base = i - iu * stride;
        for j in 0..q {
            let ju = (j / stride) % extent;
            let j_base = j - ju * stride;
            let (ri, cj) = if iu >= ju {
                (i_base + (iu - ju) * stride, j_base)
            } else {
                (i_base, j_base + (ju - iu) * stride)
            };
            if !entries_match(m[(i, j)], m[(ri, cj)]) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Visits every multi-index of the box `Π [0, extents_l)` in increasing flat
/// order (slot 0 fastest).
pub(crate) fn for_each_multi(extents: &[usize], mut f: impl FnMut(&[usize])) {
    if extents.contains(&0) {
        return;
    }
    let mut idx = vec![0usize; extents.len()];
    loop {
        f(&idx);
        let mut l = 0;
        loop {
            if l == extents.len() {
                return;
            }
            idx[l] += 1;
            if idx[l] < extents[l] {
                break;
            }
            idx[l] = 0;
            l += 1;
        }
    }
}
