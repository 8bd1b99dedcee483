//! The correspondence between P^n(K) and rank-n reduced-row-echelon
//! matrices in n rows and n+1 columns, lazy enumeration of those matrices,
//! exact kernel vectors, and the A = B*M factorization.

use std::fmt;

use crate::error::{Error, Result};
use crate::gf::{FieldElement, FieldSpec};
use crate::space::ProjectivePoint;

/// Dense matrix over GF(q), row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenericMatrix {
    rows: usize,
    cols: usize,
    spec: FieldSpec,
    data: Vec<FieldElement>,
}

impl GenericMatrix {
    pub fn zero(rows: usize, cols: usize, spec: &FieldSpec) -> GenericMatrix {
        assert!(rows > 0 && cols > 0);
        GenericMatrix {
            rows,
            cols,
            spec: spec.clone(),
            data: vec![spec.zero(); rows * cols],
        }
    }

    pub fn identity(n: usize, spec: &FieldSpec) -> GenericMatrix {
        let mut m = GenericMatrix::zero(n, n, spec);
        for i in 0..n {
            m.set(i, i, spec.one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<FieldElement>>, spec: &FieldSpec) -> GenericMatrix {
        let r = rows.len();
        let c = rows[0].len();
        assert!(rows.iter().all(|row| row.len() == c));
        GenericMatrix {
            rows: r,
            cols: c,
            spec: spec.clone(),
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }
    pub fn ncols(&self) -> usize {
        self.cols
    }
    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn get(&self, r: usize, c: usize) -> &FieldElement {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: FieldElement) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[FieldElement] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn mul(&self, other: &GenericMatrix) -> GenericMatrix {
        assert_eq!(self.cols, other.rows, "matrix dimension mismatch");
        let mut out = GenericMatrix::zero(self.rows, other.cols, &self.spec);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = self.spec.zero();
                for t in 0..self.cols {
                    acc = acc.add(&self.get(i, t).mul(other.get(t, j)));
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    pub fn mul_vector(&self, v: &[FieldElement]) -> Vec<FieldElement> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = self.spec.zero();
                for t in 0..self.cols {
                    acc = acc.add(&self.get(i, t).mul(&v[t]));
                }
                acc
            })
            .collect()
    }

    /// Reduced row echelon form with the list of pivot columns.
    /// Pivoting is the first nonzero entry, top to bottom; exact
    /// arithmetic needs nothing cleverer.
    pub fn rref(&self) -> (GenericMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(pr) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            if pr != r {
                for j in 0..m.cols {
                    let a = m.get(r, j).clone();
                    let b = m.get(pr, j).clone();
                    m.set(r, j, b);
                    m.set(pr, j, a);
                }
            }
            let inv = m.get(r, c).inv().expect("pivot is nonzero");
            for j in 0..m.cols {
                m.set(r, j, m.get(r, j).mul(&inv));
            }
            for i in 0..m.rows {
                if i != r && !m.get(i, c).is_zero() {
                    let factor = m.get(i, c).clone();
                    for j in 0..m.cols {
                        let v = m.get(i, j).sub(&m.get(r, j).mul(&factor));
                        m.set(i, j, v);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }
}

impl fmt::Display for GenericMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let cells: Vec<String> = self.row(r).iter().map(|v| v.to_string()).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

/// A rank-n RREF matrix in n rows and n+1 columns, stored in compressed
/// form: the single non-pivot column (1-based) and its free entries
/// a_1..a_{i-1}. All other columns are unit columns.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RrefMatrix {
    n: usize,
    nonpivot_col: usize,
    free_entries: Vec<FieldElement>,
    spec: FieldSpec,
}

impl RrefMatrix {
    pub fn new(
        n: usize,
        nonpivot_col: usize,
        free_entries: Vec<FieldElement>,
        spec: &FieldSpec,
    ) -> RrefMatrix {
        assert!((1..=n + 1).contains(&nonpivot_col));
        assert_eq!(free_entries.len(), nonpivot_col - 1);
        RrefMatrix { n, nonpivot_col, free_entries, spec: spec.clone() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// 1-based index of the unique column without a pivot.
    pub fn nonpivot_col(&self) -> usize {
        self.nonpivot_col
    }

    pub fn free_entries(&self) -> &[FieldElement] {
        &self.free_entries
    }

    /// Membership key: the non-pivot column and free-entry indices.
    pub fn key(&self) -> (usize, Vec<u64>) {
        (
            self.nonpivot_col,
            self.free_entries.iter().map(|a| a.index()).collect(),
        )
    }

    /// Dense n x (n+1) form: identity on the pivot columns, the free
    /// entries (then zeros) in the non-pivot column.
    pub fn expand(&self) -> GenericMatrix {
        let n = self.n;
        let i = self.nonpivot_col - 1; // 0-based
        let mut m = GenericMatrix::zero(n, n + 1, &self.spec);
        for r in 0..n {
            let pivot_col = if r < i { r } else { r + 1 };
            m.set(r, pivot_col, self.spec.one());
        }
        for (r, a) in self.free_entries.iter().enumerate() {
            m.set(r, i, a.clone());
        }
        m
    }

    /// Parse a dense n x (n+1) matrix back into compressed form;
    /// `None` when it is not rank-n RREF.
    pub fn from_dense(m: &GenericMatrix) -> Option<RrefMatrix> {
        let n = m.nrows();
        if m.ncols() != n + 1 {
            return None;
        }
        let mut leads = Vec::with_capacity(n);
        for r in 0..n {
            let lead = (0..=n).find(|&c| !m.get(r, c).is_zero())?;
            if !m.get(r, lead).is_one() {
                return None;
            }
            if leads.last().is_some_and(|&prev| lead <= prev) {
                return None;
            }
            leads.push(lead);
        }
        // pivot columns must be unit columns
        for (r, &c) in leads.iter().enumerate() {
            for i in 0..n {
                if i != r && !m.get(i, c).is_zero() {
                    return None;
                }
            }
        }
        let nonpivot = (0..=n).find(|c| !leads.contains(c)).unwrap();
        // rows whose pivot lies right of the non-pivot column carry a zero there
        let mut free = Vec::new();
        for r in 0..n {
            if leads[r] < nonpivot {
                free.push(m.get(r, nonpivot).clone());
            } else if !m.get(r, nonpivot).is_zero() {
                return None;
            }
        }
        Some(RrefMatrix::new(n, nonpivot + 1, free, m.spec()))
    }
}

impl fmt::Display for RrefMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.expand())
    }
}

/// The unique member of M_n annihilating a canonical projective point:
/// non-pivot column at the point's last nonzero coordinate, free entries
/// the negated earlier coordinates.
pub fn matrix_for_point(x: &ProjectivePoint) -> RrefMatrix {
    let i = x.last_nonzero();
    let free = x.coords()[..i].iter().map(|c| c.neg()).collect();
    RrefMatrix::new(x.dim(), i + 1, free, x.coords()[0].spec())
}

/// The unique projective point annihilated by a member of M_n.
pub fn point_for_matrix(m: &RrefMatrix) -> ProjectivePoint {
    let spec = &m.spec;
    let mut coords: Vec<FieldElement> = m.free_entries.iter().map(|a| a.neg()).collect();
    coords.push(spec.one());
    coords.resize(m.n + 1, spec.zero());
    ProjectivePoint::canonicalize(&coords).expect("coordinate i is 1")
}

/// Lazy stream of every member of M_n exactly once: non-pivot column
/// ascending, then free entries lexicographic by element index.
pub fn enumerate_rref<'a>(
    n: usize,
    spec: &'a FieldSpec,
) -> impl Iterator<Item = RrefMatrix> + 'a {
    let q = spec.q();
    (1..=n + 1).flat_map(move |i| {
        let count = (q as u128).pow((i - 1) as u32);
        (0..count).map(move |idx| {
            // decode, first entry most significant (lexicographic order)
            let mut free = vec![spec.zero(); i - 1];
            let mut rem = idx;
            for slot in (0..i - 1).rev() {
                free[slot] = spec.index_element((rem % q as u128) as u64).unwrap();
                rem /= q as u128;
            }
            RrefMatrix::new(n, i, free, spec)
        })
    })
}

/// True iff a dense n x (n+1) matrix is in reduced row echelon form with
/// rank exactly n.
pub fn is_rref_rank_full(m: &GenericMatrix) -> bool {
    RrefMatrix::from_dense(m).is_some()
}

/// A nonzero vector in the right kernel of an n x (n+1) matrix; one
/// always exists since the rank is at most n. Deterministic: the free
/// coordinate is the smallest non-pivot column of the RREF.
pub fn right_kernel_vector(a: &GenericMatrix) -> Vec<FieldElement> {
    assert_eq!(a.ncols(), a.nrows() + 1, "expected n x (n+1)");
    let spec = a.spec();
    let (r, pivots) = a.rref();
    let free_col = (0..a.ncols())
        .find(|c| !pivots.contains(c))
        .expect("rank <= n leaves a free column");
    let mut x = vec![spec.zero(); a.ncols()];
    x[free_col] = spec.one();
    for (row, &p) in pivots.iter().enumerate() {
        x[p] = r.get(row, free_col).neg();
    }
    x
}

/// Factor any n x (n+1) matrix as A = B * M with M in M_n. When A has
/// rank below n the missing pivots are completed in ascending column
/// order.
pub fn rref_factor(a: &GenericMatrix) -> Result<(GenericMatrix, RrefMatrix)> {
    let n = a.nrows();
    if a.ncols() != n + 1 {
        return Err(Error::usage(format!(
            "rref_factor expects n x (n+1), got {} x {}",
            n,
            a.ncols()
        )));
    }
    let spec = a.spec();
    let (r, pivots) = a.rref();
    let rank = pivots.len();
    let m = if rank == n {
        RrefMatrix::from_dense(&r).expect("rank-n RREF of an n x (n+1) matrix")
    } else {
        // stack the nonzero rows with unit rows at the missing pivot
        // columns and reduce again; the span still contains rowspace(A)
        let mut stack: Vec<Vec<FieldElement>> =
            (0..rank).map(|i| r.row(i).to_vec()).collect();
        for c in 0..=n {
            if stack.len() == n {
                break;
            }
            if !pivots.contains(&c) {
                let mut unit = vec![spec.zero(); n + 1];
                unit[c] = spec.one();
                stack.push(unit);
            }
        }
        let (full, full_pivots) = GenericMatrix::from_rows(stack, spec).rref();
        debug_assert_eq!(full_pivots.len(), n);
        RrefMatrix::from_dense(&full).expect("completed stack is rank-n RREF")
    };
    // rows of A expressed in the rows of M: M's pivot columns are unit
    // columns, so the coordinates can be read off directly
    let dense = m.expand();
    let pivot_cols: Vec<usize> = {
        let np = m.nonpivot_col() - 1;
        (0..=n).filter(|&c| c != np).collect()
    };
    let mut b = GenericMatrix::zero(n, n, spec);
    for t in 0..n {
        for (j, &pc) in pivot_cols.iter().enumerate() {
            b.set(t, j, a.get(t, pc).clone());
        }
    }
    debug_assert_eq!(b.mul(&dense), *a);
    Ok((b, m))
}
