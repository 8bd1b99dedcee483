//! Enumeration of affine and projective space over GF(q), with canonical
//! homogeneous-coordinate representatives.
//!
//! The canonical representative of a projective point scales the *last*
//! nonzero coordinate to 1. Enumeration orders are fixed so reruns are
//! byte-identical.

use std::fmt;

use crate::error::{Error, Result};
use crate::gf::{FieldElement, FieldSpec};

/// Cap on the number of points any one enumeration may produce.
pub const ENUM_CAP: u128 = 1 << 20;

pub type AffinePoint = Vec<FieldElement>;

/// A projective point held in canonical form: last nonzero coordinate is 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ProjectivePoint {
    coords: Vec<FieldElement>,
}

impl ProjectivePoint {
    /// Scale a nonzero coordinate vector to its canonical representative.
    pub fn canonicalize(raw: &[FieldElement]) -> Result<ProjectivePoint> {
        let last_nonzero = raw
            .iter()
            .rposition(|c| !c.is_zero())
            .ok_or(Error::NotAProjectivePoint)?;
        let scale = raw[last_nonzero].inv().expect("nonzero coordinate");
        let coords = raw.iter().map(|c| c.mul(&scale)).collect();
        Ok(ProjectivePoint { coords })
    }

    pub fn coords(&self) -> &[FieldElement] {
        &self.coords
    }

    /// Dimension n of the ambient P^n (one less than the coordinate count).
    pub fn dim(&self) -> usize {
        self.coords.len() - 1
    }

    /// Index of the last nonzero coordinate (whose value is 1), 0-based.
    pub fn last_nonzero(&self) -> usize {
        self.coords
            .iter()
            .rposition(|c| !c.is_zero())
            .expect("projective point has a nonzero coordinate")
    }
}

impl fmt::Display for ProjectivePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cs: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "[{}]", cs.join(":"))
    }
}

pub fn format_affine(p: &[FieldElement]) -> String {
    let cs: Vec<String> = p.iter().map(|c| c.to_string()).collect();
    format!("({})", cs.join(","))
}

fn check_cap(count: u128, what: &str) -> Result<()> {
    if count > ENUM_CAP {
        return Err(Error::ResourceLimit(format!(
            "{what} has {count} points, over the enumeration cap of {ENUM_CAP}"
        )));
    }
    Ok(())
}

/// All q^n points of A^n(F_q), lexicographic by element index. The first
/// point is the all-zero tuple; the last coordinate varies fastest.
pub fn enum_affine(n: usize, spec: &FieldSpec) -> Result<Vec<AffinePoint>> {
    let q = spec.q() as u128;
    let count = q.pow(n as u32);
    check_cap(count, "affine space")?;
    let mut out = Vec::with_capacity(count as usize);
    let mut point = vec![0u64; n];
    loop {
        out.push(
            point
                .iter()
                .map(|&i| spec.index_element(i).unwrap())
                .collect::<Vec<_>>(),
        );
        // odometer increment, last coordinate fastest
        let mut k = n;
        loop {
            if k == 0 {
                return Ok(out);
            }
            k -= 1;
            point[k] += 1;
            if point[k] < spec.q() {
                break;
            }
            point[k] = 0;
        }
    }
}

/// All (q^{n+1}-1)/(q-1) canonical points of P^n(F_q), ordered by the
/// position of the last nonzero coordinate ascending, then lexicographic.
pub fn enum_projective(n: usize, spec: &FieldSpec) -> Result<Vec<ProjectivePoint>> {
    let count = projective_count(n, spec.q());
    check_cap(count, "projective space")?;
    let mut out = Vec::with_capacity(count as usize);
    for j in 0..=n {
        // coordinates before j free, coordinate j = 1, rest zero
        for prefix in enum_affine(j, spec)? {
            let mut coords = prefix;
            coords.push(spec.one());
            coords.resize(n + 1, spec.zero());
            out.push(ProjectivePoint { coords });
        }
    }
    Ok(out)
}

/// |P^n(F_q)| = (q^{n+1} - 1)/(q - 1).
pub fn projective_count(n: usize, q: u64) -> u128 {
    let q = q as u128;
    (q.pow(n as u32 + 1) - 1) / (q - 1)
}

/// The largest |X| the reduction theorem covers: (q^{n+1} - q)/(q - 1),
/// which is |P^n(F_q)| - 1.
pub fn projective_bound(n: usize, q: u64) -> u128 {
    let q = q as u128;
    (q.pow(n as u32 + 1) - q) / (q - 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(q: &str) -> FieldSpec {
        FieldSpec::parse(q).unwrap()
    }

    #[test]
    fn canonicalize_examples() {
        let f3 = gf("3");
        let raw = vec![f3.from_int(1), f3.from_int(2), f3.zero()];
        let p = ProjectivePoint::canonicalize(&raw).unwrap();
        assert_eq!(p.coords(), &[f3.from_int(2), f3.one(), f3.zero()]);

        let f5 = gf("5");
        let unit = vec![f5.zero(), f5.zero(), f5.one()];
        assert_eq!(
            ProjectivePoint::canonicalize(&unit).unwrap().coords(),
            unit.as_slice()
        );

        let f2 = gf("2");
        let v = vec![f2.one(), f2.zero(), f2.one()];
        assert_eq!(ProjectivePoint::canonicalize(&v).unwrap().coords(), v.as_slice());

        let zero = vec![f3.zero(); 3];
        assert_eq!(
            ProjectivePoint::canonicalize(&zero),
            Err(Error::NotAProjectivePoint)
        );
    }

    #[test]
    fn affine_enumeration() {
        let f2 = gf("2");
        let pts = enum_affine(2, &f2).unwrap();
        assert_eq!(pts.len(), 4);
        assert!(pts[0].iter().all(|c| c.is_zero()));
        assert_eq!(enum_affine(1, &gf("5")).unwrap().len(), 5);
    }

    #[test]
    fn projective_enumeration() {
        let f3 = gf("3");
        assert_eq!(enum_projective(2, &f3).unwrap().len(), 13);

        let f2 = gf("2");
        let pts = enum_projective(1, &f2).unwrap();
        let printed: Vec<String> = pts.iter().map(|p| p.to_string()).collect();
        assert_eq!(printed, vec!["[1:0]", "[0:1]", "[1:1]"]);
    }

    #[test]
    fn projective_points_are_canonical_and_distinct() {
        for q in ["2", "3", "2^2", "5"] {
            let spec = gf(q);
            for n in 1..=3 {
                let pts = enum_projective(n, &spec).unwrap();
                assert_eq!(pts.len() as u128, projective_count(n, spec.q()));
                let mut seen = std::collections::HashSet::new();
                for p in &pts {
                    assert!(p.coords()[p.last_nonzero()].is_one());
                    assert!(seen.insert(p.clone()));
                }
            }
        }
    }

    #[test]
    fn canonicalize_constant_on_classes() {
        // exhaustive over all nonzero vectors for small q and n
        for q in ["2", "3", "2^2"] {
            let spec = gf(q);
            for n in 1..=3 {
                for v in enum_affine(n + 1, &spec).unwrap() {
                    if v.iter().all(|c| c.is_zero()) {
                        continue;
                    }
                    let p = ProjectivePoint::canonicalize(&v).unwrap();
                    // idempotent
                    assert_eq!(ProjectivePoint::canonicalize(p.coords()).unwrap(), p);
                    // constant on the scalar orbit
                    for s in spec.elements().skip(1) {
                        let scaled: Vec<_> = v.iter().map(|c| c.mul(&s)).collect();
                        assert_eq!(ProjectivePoint::canonicalize(&scaled).unwrap(), p);
                    }
                }
            }
        }
    }

    #[test]
    fn bound_identities() {
        assert_eq!(projective_bound(1, 2), 2);
        assert_eq!(projective_bound(2, 3), 12);
        assert!(projective_bound(2, 2) == 6 && 6 >= 4);
        for q in [2u64, 3, 4, 5] {
            let spec = match q {
                4 => gf("2^2"),
                _ => FieldSpec::prime(q).unwrap(),
            };
            for n in 1..=3 {
                let count = enum_projective(n, &spec).unwrap().len() as u128;
                assert_eq!(projective_bound(n, q), count - 1);
                assert!(projective_bound(n, q) >= (q as u128).pow(n as u32));
            }
        }
    }

    #[test]
    fn resource_limit() {
        let f7 = gf("7");
        assert!(matches!(
            enum_affine(10, &f7),
            Err(Error::ResourceLimit(_))
        ));
    }
}
