//! Small subsets whose strong hull already contains a point.

use itertools::Itertools;

use crate::body::{Body, ProductBody};
use crate::covering::CoverWitness;
use crate::error::{GeomError, Result};
use crate::linalg::{block, check_dim, Vector};
use crate::strong::{hull_member, Membership};
use crate::tolerance::ToleranceConfig;

/// Why a point belongs to a certificate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointRole {
    Support,
    /// Needed for the first factor of a product gauge.
    LFactor,
    /// Needed for the second factor.
    MFactor,
    BothFactors,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SubsetCertificate {
    /// Sorted indices into `X`.
    pub indices: Vec<usize>,
    pub roles: Vec<PointRole>,
    /// Membership margin of `p` in the hull of the subset (≤ 0 inside).
    pub margin: f64,
    /// Every smaller subset that was tested, with a translate separating it
    /// from `p`.
    pub rejected: Vec<(Vec<usize>, CoverWitness)>,
}

impl SubsetCertificate {
    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn points(&self, x: &[Vector]) -> Vec<Vector> {
        self.indices.iter().map(|&i| x[i].clone()).collect()
    }

    /// Rechecks the subset's membership and every rejection witness.
    pub fn revalidate(&self, k: &Body, x: &[Vector], p: &Vector, tol: &ToleranceConfig) -> Result<bool> {
        if !hull_member(k, &self.points(x), p, tol)?.is_member() {
            return Ok(false);
        }
        for (idx, w) in &self.rejected {
            let pts: Vec<Vector> = idx.iter().map(|&i| x[i].clone()).collect();
            if !w.verify(k, &pts, p, tol)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

fn pick(x: &[Vector], idx: &[usize]) -> Vec<Vector> {
    idx.iter().map(|&i| x[i].clone()).collect()
}

fn require_member(k: &Body, x: &[Vector], p: &Vector, tol: &ToleranceConfig) -> Result<()> {
    match hull_member(k, x, p, tol)? {
        Membership::Member { .. } => Ok(()),
        Membership::NotMember(_) => Err(GeomError::Precondition("point is not in the strong hull".into())),
    }
}

/// Smallest subset (lexicographically first among equal sizes) whose strong
/// hull contains `p`. A separating translate found for one subset also
/// rejects every subset it covers, so such subsets are not retested.
pub fn minimal_subset(k: &Body, x: &[Vector], p: &Vector, tol: &ToleranceConfig) -> Result<SubsetCertificate> {
    check_dim(k.dim(), p.len())?;
    require_member(k, x, p, tol)?;
    // (witness, bitmask of the points of X it covers)
    let mut cache: Vec<(CoverWitness, Vec<bool>)> = Vec::new();
    let mut rejected = Vec::new();
    for size in 1..=x.len() {
        for idx in (0..x.len()).combinations(size) {
            if let Some((w, _)) = cache.iter().find(|(_, mask)| idx.iter().all(|&i| mask[i])) {
                rejected.push((idx, w.clone()));
                continue;
            }
            match hull_member(k, &pick(x, &idx), p, tol)? {
                Membership::Member { margin, .. } => {
                    let roles = vec![PointRole::Support; idx.len()];
                    return Ok(SubsetCertificate {
                        indices: idx,
                        roles,
                        margin,
                        rejected,
                    });
                }
                Membership::NotMember(w) => {
                    let mask = x
                        .iter()
                        .map(|xi| k.contains(&(xi - &w.t), tol))
                        .collect::<Result<Vec<bool>>>()?;
                    cache.push((w.clone(), mask));
                    rejected.push((idx, w));
                }
            }
        }
    }
    Err(GeomError::Internal("no subset contains the point although X does".into()))
}

/// Factor data for a product gauge `L × M`.
struct Factors<'a> {
    l: &'a Body,
    m: &'a Body,
    px: Vec<Vector>,
    qx: Vec<Vector>,
    pp: Vector,
    qp: Vector,
}

impl Factors<'_> {
    fn in_l(&self, idx: &[usize], tol: &ToleranceConfig) -> Result<bool> {
        Ok(hull_member(self.l, &pick(&self.px, idx), &self.pp, tol)?.is_member())
    }

    fn in_m(&self, idx: &[usize], tol: &ToleranceConfig) -> Result<bool> {
        Ok(hull_member(self.m, &pick(&self.qx, idx), &self.qp, tol)?.is_member())
    }
}

/// Reduces to at most `ℓ + m` points for the product gauge `L × M`, using
/// that the strong hull of a product is the product of the factor hulls.
pub fn product_reduce(l: &Body, m: &Body, x: &[Vector], p: &Vector, tol: &ToleranceConfig) -> Result<SubsetCertificate> {
    let (dl, dm) = (l.dim(), m.dim());
    let n = dl + dm;
    check_dim(n, p.len())?;
    for xi in x {
        check_dim(n, xi.len())?;
    }
    let k = Body::Product(ProductBody::new(vec![l.clone(), m.clone()])?);
    require_member(&k, x, p, tol)?;
    let f = Factors {
        l,
        m,
        px: x.iter().map(|v| block(v, 0, dl)).collect(),
        qx: x.iter().map(|v| block(v, dl, dm)).collect(),
        pp: block(p, 0, dl),
        qp: block(p, dl, dm),
    };

    let chosen = if x.len() <= n {
        (0..x.len()).collect_vec()
    } else if dl == 1 && dm == 1 {
        opposite_quadrants(&f, x.len(), tol)?
    } else {
        let y = minimal_subset(l, &f.px, &f.pp, tol)?.indices;
        let z = minimal_subset(m, &f.qx, &f.qp, tol)?.indices;
        let union = y.iter().chain(&z).copied().sorted().dedup().collect_vec();
        if union.len() <= n {
            union
        } else if union.len() == n + 2 {
            swap_reduce(&f, &y, &z, tol)?
        } else {
            drop_one(&f, &union, tol)?
        }
    };
    finish(&k, &f, x, p, chosen, tol)
}

fn finish(k: &Body, f: &Factors, x: &[Vector], p: &Vector, chosen: Vec<usize>, tol: &ToleranceConfig) -> Result<SubsetCertificate> {
    let margin = match hull_member(k, &pick(x, &chosen), p, tol)? {
        Membership::Member { margin, .. } => margin,
        Membership::NotMember(_) => return Err(GeomError::Internal("reduced subset lost the point".into())),
    };
    let local_px = pick(&f.px, &chosen);
    let local_qx = pick(&f.qx, &chosen);
    let ly = minimal_subset(f.l, &local_px, &f.pp, tol)?.indices;
    let mz = minimal_subset(f.m, &local_qx, &f.qp, tol)?.indices;
    let roles = (0..chosen.len())
        .map(|j| match (ly.contains(&j), mz.contains(&j)) {
            (true, true) => PointRole::BothFactors,
            (true, false) => PointRole::LFactor,
            (false, true) => PointRole::MFactor,
            (false, false) => PointRole::Support,
        })
        .collect();
    Ok(SubsetCertificate {
        indices: chosen,
        roles,
        margin,
        rejected: Vec::new(),
    })
}

/// Square gauge: two points in opposite closed quadrants around `p` (or a
/// point equal to `p`).
fn opposite_quadrants(f: &Factors, len: usize, tol: &ToleranceConfig) -> Result<Vec<usize>> {
    for i in 0..len {
        if f.in_l(&[i], tol)? && f.in_m(&[i], tol)? {
            return Ok(vec![i]);
        }
    }
    for (i, j) in (0..len).tuple_combinations() {
        if f.in_l(&[i, j], tol)? && f.in_m(&[i, j], tol)? {
            return Ok(vec![i, j]);
        }
    }
    Err(GeomError::Internal("no opposite-quadrant pair".into()))
}

/// `f(y)`: the first `z ∈ Z` that can be exchanged for `y` keeping the
/// second-factor membership.
fn exchange(zs: &[usize], y: usize, member: impl Fn(&[usize]) -> Result<bool>) -> Result<Option<usize>> {
    for &z in zs {
        let trial = zs.iter().copied().filter(|&w| w != z).chain([y]).collect_vec();
        if member(&trial)? {
            return Ok(Some(z));
        }
    }
    Ok(None)
}

/// Disjoint `Y`, `Z` of sizes `ℓ+1`, `m+1`: choose `y*`, `z*` with
/// `f(y*) ≠ z*` and `g(z*) ≠ y*`, then drop `f(y*)` and `g(z*)`.
fn swap_reduce(f: &Factors, y: &[usize], z: &[usize], tol: &ToleranceConfig) -> Result<Vec<usize>> {
    let fmap = y
        .iter()
        .map(|&yi| exchange(z, yi, |idx| f.in_m(idx, tol)))
        .collect::<Result<Vec<_>>>()?;
    let gmap = z
        .iter()
        .map(|&zi| exchange(y, zi, |idx| f.in_l(idx, tol)))
        .collect::<Result<Vec<_>>>()?;
    for (a, &ys) in y.iter().enumerate() {
        let Some(fy) = fmap[a] else { continue };
        for (b, &zs) in z.iter().enumerate() {
            let Some(gz) = gmap[b] else { continue };
            if fy != zs && gz != ys {
                return Ok(y
                    .iter()
                    .chain(z)
                    .copied()
                    .filter(|&i| i != fy && i != gz)
                    .sorted()
                    .collect());
            }
        }
    }
    Err(GeomError::Internal("no non-adjacent pair for the exchange maps".into()))
}

/// `|Y ∪ Z| = n + 1`: drop the first point whose removal keeps both factor
/// memberships.
fn drop_one(f: &Factors, union: &[usize], tol: &ToleranceConfig) -> Result<Vec<usize>> {
    for &w in union {
        let rest = union.iter().copied().filter(|&i| i != w).collect_vec();
        if f.in_l(&rest, tol)? && f.in_m(&rest, tol)? {
            return Ok(rest);
        }
    }
    Err(GeomError::Internal("no droppable point".into()))
}

/// For `|X| = n + 2`, two distinct `(n+1)`-subsets whose strong hulls
/// contain `p`.
pub fn two_subhulls(k: &Body, x: &[Vector], p: &Vector, tol: &ToleranceConfig) -> Result<(Vec<usize>, Vec<usize>)> {
    let n = k.dim();
    if x.len() != n + 2 {
        return Err(GeomError::Precondition(format!("expected {} points, got {}", n + 2, x.len())));
    }
    require_member(k, x, p, tol)?;
    let mut hits = Vec::new();
    for idx in (0..x.len()).combinations(n + 1) {
        if hull_member(k, &pick(x, &idx), p, tol)?.is_member() {
            hits.push(idx);
            if hits.len() == 2 {
                let second = hits.pop().expect("two hits");
                let first = hits.pop().expect("two hits");
                return Ok((first, second));
            }
        }
    }
    Err(GeomError::Internal(format!("only {} subhull(s) contain the point", hits.len())))
}
