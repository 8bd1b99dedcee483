//! Ground truth: brute-force zero sets, zero-set-equality certification,
//! and the extremal instance on one representative per projective point,
//! where n+1 coordinate functions have empty zero set but every n scalar
//! combinations have a common zero.

use std::collections::BTreeSet;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bijection::{right_kernel_vector, GenericMatrix};
use crate::error::{Error, Result};
use crate::gf::FieldSpec;
use crate::reducer::SystemTable;
use crate::space::{enum_projective, ProjectivePoint};

/// Labels of the points where every row vanishes.
pub fn zero_set(table: &SystemTable) -> BTreeSet<String> {
    (0..table.npoints())
        .filter(|&j| table.rows().iter().all(|r| r[j].is_zero()))
        .map(|j| table.labels()[j].clone())
        .collect()
}

/// Set equality of zero sets; the tables must describe the same points.
pub fn zero_sets_equal(t1: &SystemTable, t2: &SystemTable) -> Result<bool> {
    if t1.labels() != t2.labels() {
        return Err(Error::usage("tables describe different point sequences"));
    }
    Ok(zero_set(t1) == zero_set(t2))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SharpnessMode {
    /// Sweep every matrix A in M_{n,n+1}(F_q).
    Exhaustive,
    /// Random matrices, each certified through its kernel point.
    KernelCertified,
}

/// Outcome of the sharpness sweep.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SharpnessReport {
    pub q: u64,
    pub n: usize,
    pub x_size: usize,
    pub z_of_f_empty: bool,
    pub matrices_checked: u64,
    pub all_have_zero: bool,
    /// A matrix whose n-row system has no zero on X_n; must never occur.
    pub counterexample: Option<(GenericMatrix, String)>,
}

impl fmt::Display for SharpnessReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "q: {}", self.q)?;
        writeln!(f, "n: {}", self.n)?;
        writeln!(f, "x_size: {}", self.x_size)?;
        writeln!(f, "z_of_f_empty: {}", self.z_of_f_empty)?;
        writeln!(f, "matrices_checked: {}", self.matrices_checked)?;
        writeln!(f, "all_have_zero: {}", self.all_have_zero)?;
        match &self.counterexample {
            None => writeln!(f, "counterexample: none"),
            Some((a, point)) => {
                writeln!(f, "counterexample: at {point}")?;
                write!(f, "{a}")
            }
        }
    }
}

/// The n+1 coordinate functions tabulated on the canonical representatives
/// of P^n(F_q): the value column at a point is the point itself.
pub fn build_sharpness_instance(n: usize, spec: &FieldSpec) -> Result<SystemTable> {
    let points = enum_projective(n, spec)?;
    let labels = points.iter().map(|p| p.to_string()).collect();
    let rows = (0..=n)
        .map(|i| points.iter().map(|p| p.coords()[i].clone()).collect())
        .collect();
    SystemTable::new(labels, rows, spec.clone())
}

/// Verify the sharpness claim: the full instance has empty zero set, yet
/// every n-row scalar image A*f has a common zero on X_n.
pub fn check_sharpness(
    n: usize,
    spec: &FieldSpec,
    mode: SharpnessMode,
    limit: u64,
    seed: u64,
) -> Result<SharpnessReport> {
    let instance = build_sharpness_instance(n, spec)?;
    let points = enum_projective(n, spec)?;
    let z_of_f_empty = zero_set(&instance).is_empty();
    let q = spec.q();

    let entries = n * (n + 1);
    let mut matrices_checked = 0u64;
    let mut counterexample = None;

    let mut check_matrix = |a: &GenericMatrix| {
        matrices_checked += 1;
        // rows of A*f at point x are A * x, since f(x) = x on X_n
        let hit = points
            .iter()
            .any(|p| a.mul_vector(p.coords()).iter().all(|v| v.is_zero()));
        if !hit && counterexample.is_none() {
            counterexample = Some((a.clone(), "no common zero on X_n".to_string()));
        }
        // independent certificate: the kernel point works for every A
        let kernel = right_kernel_vector(a);
        let canon = ProjectivePoint::canonicalize(&kernel).expect("kernel is nonzero");
        debug_assert!(points.contains(&canon));
        if !a.mul_vector(canon.coords()).iter().all(|v| v.is_zero())
            && counterexample.is_none()
        {
            counterexample = Some((a.clone(), format!("kernel point {canon} not a zero")));
        }
    };

    match mode {
        SharpnessMode::Exhaustive => {
            let total = (q as u128).checked_pow(entries as u32).ok_or_else(|| {
                Error::ResourceLimit("matrix count overflows".to_string())
            })?;
            if total > limit as u128 {
                return Err(Error::ResourceLimit(format!(
                    "exhaustive sweep needs {total} matrices, over the limit of {limit}"
                )));
            }
            let mut digits = vec![0u64; entries];
            loop {
                let mut a = GenericMatrix::zero(n, n + 1, spec);
                for r in 0..n {
                    for c in 0..=n {
                        a.set(r, c, spec.index_element(digits[r * (n + 1) + c])?);
                    }
                }
                check_matrix(&a);
                let mut pos = entries;
                loop {
                    if pos == 0 {
                        let all_have_zero = counterexample.is_none();
                        return Ok(SharpnessReport {
                            q,
                            n,
                            x_size: instance.npoints(),
                            z_of_f_empty,
                            matrices_checked,
                            all_have_zero,
                            counterexample,
                        });
                    }
                    pos -= 1;
                    digits[pos] += 1;
                    if digits[pos] < q {
                        break;
                    }
                    digits[pos] = 0;
                }
            }
        }
        SharpnessMode::KernelCertified => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..limit {
                let mut a = GenericMatrix::zero(n, n + 1, spec);
                for r in 0..n {
                    for c in 0..=n {
                        a.set(r, c, spec.index_element(rng.gen_range(0..q))?);
                    }
                }
                check_matrix(&a);
            }
            let all_have_zero = counterexample.is_none();
            Ok(SharpnessReport {
                q,
                n,
                x_size: instance.npoints(),
                z_of_f_empty,
                matrices_checked,
                all_have_zero,
                counterexample,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(q: &str) -> FieldSpec {
        FieldSpec::parse(q).unwrap()
    }

    fn table(labels: &[&str], rows: &[&[i64]], spec: &FieldSpec) -> SystemTable {
        SystemTable::new(
            labels.iter().map(|l| l.to_string()).collect(),
            rows.iter()
                .map(|r| r.iter().map(|&v| spec.from_int(v)).collect())
                .collect(),
            spec.clone(),
        )
        .unwrap()
    }

    #[test]
    fn zero_set_examples() {
        let f2 = gf("2");
        let all_zero = table(&["a", "b"], &[&[0, 0]], &f2);
        assert_eq!(zero_set(&all_zero).len(), 2);
        let none = table(&["a", "b"], &[&[1, 1]], &f2);
        assert!(zero_set(&none).is_empty());
        let xs = table(&["0", "1"], &[&[0, 1], &[1, 0]], &f2);
        assert!(zero_set(&xs).is_empty());
    }

    #[test]
    fn zero_sets_equal_examples() {
        let f2 = gf("2");
        let t = table(&["a", "b"], &[&[0, 1]], &f2);
        assert!(zero_sets_equal(&t, &t).unwrap());
        let z = table(&["a", "b"], &[&[0, 0]], &f2);
        let nz = table(&["a", "b"], &[&[1, 1]], &f2);
        assert!(!zero_sets_equal(&z, &nz).unwrap());
        let other = table(&["x", "y"], &[&[0, 0]], &f2);
        assert!(zero_sets_equal(&z, &other).is_err());
    }

    #[test]
    fn sharpness_instance_examples() {
        let f2 = gf("2");
        let t = build_sharpness_instance(1, &f2).unwrap();
        assert_eq!(t.labels(), &["[1:0]", "[0:1]", "[1:1]"]);
        assert_eq!(t.rows()[0], vec![f2.one(), f2.zero(), f2.one()]);
        assert_eq!(t.rows()[1], vec![f2.zero(), f2.one(), f2.one()]);
        assert!(zero_set(&t).is_empty());

        let f3 = gf("3");
        assert_eq!(build_sharpness_instance(2, &f3).unwrap().npoints(), 13);
        for (q, n) in [("2", 1), ("3", 1), ("2^2", 1), ("2", 2), ("3", 2)] {
            let t = build_sharpness_instance(n, &gf(q)).unwrap();
            assert!(zero_set(&t).is_empty(), "GF({q}), n={n}");
        }
    }

    #[test]
    fn check_sharpness_small_exhaustive() {
        let f2 = gf("2");
        let report =
            check_sharpness(1, &f2, SharpnessMode::Exhaustive, 1_000_000, 0).unwrap();
        assert_eq!(report.matrices_checked, 4);
        assert!(report.z_of_f_empty);
        assert!(report.all_have_zero);
        assert!(report.counterexample.is_none());
    }

    #[test]
    fn check_sharpness_f3_n2_exhaustive() {
        let f3 = gf("3");
        let report =
            check_sharpness(2, &f3, SharpnessMode::Exhaustive, 1_000_000, 0).unwrap();
        assert_eq!(report.matrices_checked, 729);
        assert!(report.z_of_f_empty && report.all_have_zero);
    }

    #[test]
    fn check_sharpness_kernel_certified() {
        let f5 = gf("5");
        let report =
            check_sharpness(2, &f5, SharpnessMode::KernelCertified, 500, 42).unwrap();
        assert_eq!(report.matrices_checked, 500);
        assert!(report.z_of_f_empty && report.all_have_zero);
    }

    #[test]
    fn exhaustive_over_limit() {
        let f3 = gf("3");
        assert!(matches!(
            check_sharpness(2, &f3, SharpnessMode::Exhaustive, 100, 0),
            Err(Error::ResourceLimit(_))
        ));
    }

    #[test]
    fn report_serialization() {
        let f2 = gf("2");
        let report =
            check_sharpness(1, &f2, SharpnessMode::Exhaustive, 1_000_000, 0).unwrap();
        let text = report.to_string();
        assert!(text.contains("q: 2"));
        assert!(text.contains("matrices_checked: 4"));
        assert!(text.contains("counterexample: none"));
    }
}
