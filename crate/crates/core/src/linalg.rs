//! Exact spans inside a truncated graded space.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::{mod_inv, Scalar};
use crate::voa::vector::GradedVector;

/// The Mersenne prime used for modular screening.
pub const SCREEN_PRIME: u64 = (1 << 61) - 1;

#[inline]
fn mulmod(a: u64, b: u64) -> u64 {
    let t = a as u128 * b as u128;
    let s = (t as u64 & SCREEN_PRIME) + (t >> 61) as u64;
    if s >= SCREEN_PRIME {
        s - SCREEN_PRIME
    } else {
        s
    }
}

#[inline]
fn submod(a: u64, b: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + SCREEN_PRIME - b
    }
}

/// Coordinates for `F_W ⊗ C^mult`, the weights `0..=max_weight` with the
/// given dimensions.
///
/// Columns are ordered by weight descending, then basis index, then the
/// tensor factor, so that echelon pivots sit on the highest weight present
/// and quotient representatives are of low weight.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FilteredSpace {
    dims: Vec<usize>,
    mult: usize,
    offsets: Vec<usize>,
    total: usize,
}

impl FilteredSpace {
    pub fn new(dims: Vec<usize>, mult: usize) -> Self {
        let mut offsets = vec![0; dims.len()];
        let mut acc = 0;
        for w in (0..dims.len()).rev() {
            offsets[w] = acc;
            acc += dims[w] * mult;
        }
        Self { dims, mult, offsets, total: acc }
    }

    pub fn dim(&self) -> usize {
        self.total
    }

    pub fn max_weight(&self) -> usize {
        self.dims.len().saturating_sub(1)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn mult(&self) -> usize {
        self.mult
    }

    pub fn column(&self, weight: usize, index: usize, factor: usize) -> Option<usize> {
        (weight < self.dims.len() && index < self.dims[weight] && factor < self.mult)
            .then(|| self.offsets[weight] + index * self.mult + factor)
    }

    /// Inverse of [`FilteredSpace::column`].
    pub fn key(&self, col: usize) -> (usize, usize, usize) {
        let w = (0..self.dims.len())
            .find(|&w| col >= self.offsets[w] && col < self.offsets[w] + self.dims[w] * self.mult)
            .expect("column in range");
        let r = col - self.offsets[w];
        (w, r / self.mult, r % self.mult)
    }

    /// Dense coordinates of `Σ_k parts[k] ⊗ e_k`.
    pub fn dense_tensor<S: Scalar>(&self, parts: &[(usize, &GradedVector<S>)]) -> Result<Vec<S>> {
        let mut out = vec![S::zero(); self.total];
        for &(k, v) in parts {
            for (w, i, c) in v.iter() {
                let col = self.column(w, i, k).ok_or(Error::WeightRange { needed: w, max: self.max_weight() })?;
                out[col] = out[col].clone() + c.clone();
            }
        }
        Ok(out)
    }

    pub fn dense<S: Scalar>(&self, v: &GradedVector<S>) -> Result<Vec<S>> {
        self.dense_tensor(&[(0, v)])
    }

    /// Splits sparse coordinates back into one vector per tensor factor.
    pub fn split<S: Scalar>(&self, entries: &[(usize, S)]) -> Vec<GradedVector<S>> {
        let mut out = vec![GradedVector::zero(); self.mult];
        for (col, c) in entries {
            let (w, i, k) = self.key(*col);
            out[k].add_term(w, i, c.clone());
        }
        out
    }

    pub fn vector<S: Scalar>(&self, entries: &[(usize, S)]) -> GradedVector<S> {
        self.split(entries).into_iter().next().unwrap_or_default()
    }
}

/// Whether insertions are prescreened modulo [`SCREEN_PRIME`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Elimination {
    /// Every row is reduced exactly.
    Exact,
    /// Rows that vanish after reduction mod p are discarded without exact
    /// work. Rows independent mod p are independent over Q, so the rank can
    /// only be underestimated, and then with probability about `rank / p`.
    Screened,
}

/// An exact reduced row-echelon basis of a span.
#[derive(Clone, Debug)]
pub struct SpanBasis<S> {
    ncols: usize,
    mode: Elimination,
    screen_rows: Vec<(usize, Vec<u64>)>,
    rows: Vec<Vec<(usize, S)>>,
    pivots: Vec<usize>,
    pivot_row: Vec<Option<usize>>,
    offered: usize,
    screened_out: usize,
}

impl<S: Scalar> SpanBasis<S> {
    pub fn new(ncols: usize, mode: Elimination) -> Self {
        let mode = if S::EXACT { mode } else { Elimination::Exact };
        Self {
            ncols,
            mode,
            screen_rows: Vec::new(),
            rows: Vec::new(),
            pivots: Vec::new(),
            pivot_row: vec![None; ncols],
            offered: 0,
            screened_out: 0,
        }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn mode(&self) -> Elimination {
        self.mode
    }

    /// Number of rows offered to [`SpanBasis::insert`].
    pub fn offered(&self) -> usize {
        self.offered
    }

    pub fn screened_out(&self) -> usize {
        self.screened_out
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// The RREF rows, each normalized to 1 at its pivot.
    pub fn rows(&self) -> &[Vec<(usize, S)>] {
        &self.rows
    }

    /// Columns without a pivot; they index a basis of the quotient.
    pub fn free_columns(&self) -> Vec<usize> {
        (0..self.ncols).filter(|&c| self.pivot_row[c].is_none()).collect()
    }

    fn screen_dependent(&self, row: &[S]) -> Option<Vec<u64>> {
        let mut x = Vec::with_capacity(row.len());
        for c in row {
            x.push(c.residue(SCREEN_PRIME)?);
        }
        for (pivot, r) in &self.screen_rows {
            let f = x[*pivot];
            if f == 0 {
                continue;
            }
            for j in *pivot..self.ncols {
                if r[j] != 0 {
                    x[j] = submod(x[j], mulmod(f, r[j]));
                }
            }
        }
        Some(x)
    }

    fn add_screen_row(&mut self, mut x: Vec<u64>) {
        let Some(pivot) = x.iter().position(|&c| c != 0) else { return };
        let inv = mod_inv(x[pivot], SCREEN_PRIME);
        for c in x.iter_mut().skip(pivot) {
            *c = mulmod(*c, inv);
        }
        let pos = self.screen_rows.partition_point(|(p, _)| *p < pivot);
        self.screen_rows.insert(pos, (pivot, x));
    }

    fn reduce_dense(&self, x: &mut [S]) {
        for (r, &pivot) in self.rows.iter().zip(&self.pivots) {
            let f = x[pivot].clone();
            if f.is_zero() {
                continue;
            }
            for (j, c) in r {
                x[*j] = x[*j].clone() - f.clone() * c.clone();
            }
        }
    }

    /// Adds a dense row; returns whether the rank grew.
    pub fn insert(&mut self, row: &[S]) -> bool {
        assert_eq!(row.len(), self.ncols, "row length must match the ambient dimension");
        self.offered += 1;
        let mut screened = None;
        if self.mode == Elimination::Screened {
            if let Some(x) = self.screen_dependent(row) {
                if x.iter().all(|&c| c == 0) {
                    self.screened_out += 1;
                    return false;
                }
                screened = Some(x);
            }
        }
        let mut x = row.to_vec();
        self.reduce_dense(&mut x);
        let Some(pivot) = x.iter().position(|c| !c.is_zero()) else { return false };
        let inv = S::one() / x[pivot].clone();
        let new: Vec<(usize, S)> =
            x.into_iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(j, c)| (j, c * inv.clone())).collect();
        for r in self.rows.iter_mut() {
            let Some(pos) = r.iter().position(|(j, _)| *j == pivot) else { continue };
            let f = r[pos].1.clone();
            *r = axpy_sparse(r, &new, &f);
        }
        self.pivot_row[pivot] = Some(self.rows.len());
        self.rows.push(new);
        self.pivots.push(pivot);
        if let Some(x) = screened {
            self.add_screen_row(x);
        }
        true
    }

    pub fn insert_sparse(&mut self, row: &[(usize, S)]) -> bool {
        let mut dense = vec![S::zero(); self.ncols];
        for (j, c) in row {
            dense[*j] = dense[*j].clone() + c.clone();
        }
        self.insert(&dense)
    }

    /// Normal form of `v` modulo the span, as sparse coordinates. Zero iff
    /// `v` lies in the span.
    pub fn reduce(&self, v: &[S]) -> Vec<(usize, S)> {
        let mut x = v.to_vec();
        self.reduce_dense(&mut x);
        x.into_iter().enumerate().filter(|(_, c)| !c.is_zero()).collect()
    }

    pub fn contains(&self, v: &[S]) -> bool {
        self.reduce(v).is_empty()
    }

    /// A basis of the vectors orthogonal to every inserted row, one per free
    /// column.
    pub fn null_space(&self) -> Vec<Vec<(usize, S)>> {
        self.free_columns()
            .into_iter()
            .map(|f| {
                let mut v: Vec<(usize, S)> = self
                    .rows
                    .iter()
                    .zip(&self.pivots)
                    .filter_map(|(r, &p)| r.iter().find(|(j, _)| *j == f).map(|(_, c)| (p, -c.clone())))
                    .collect();
                v.push((f, S::one()));
                v.sort_by_key(|(j, _)| *j);
                v
            })
            .collect()
    }
}

/// `a - f * b` for sparse sorted rows.
fn axpy_sparse<S: Scalar>(a: &[(usize, S)], b: &[(usize, S)], f: &S) -> Vec<(usize, S)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = j >= b.len() || (i < a.len() && a[i].0 < b[j].0);
        let take_b = i >= a.len() || (j < b.len() && b[j].0 < a[i].0);
        if take_a {
            out.push(a[i].clone());
            i += 1;
        } else if take_b {
            out.push((b[j].0, -(f.clone() * b[j].1.clone())));
            j += 1;
        } else {
            let c = a[i].1.clone() - f.clone() * b[j].1.clone();
            if !c.is_zero() {
                out.push((a[i].0, c));
            }
            i += 1;
            j += 1;
        }
    }
    out
}
