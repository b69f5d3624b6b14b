//! Incremental double description for pointed polyhedral cones.

use fixedbitset::FixedBitSet;
use num_traits::{One, Signed, Zero};

use crate::exactlin::{dot, is_zero_vec, nullspace, primitive, primitive_from_rat, rref, IVec, Int, QMat, Rat};

struct Ray {
    v: IVec,
    zeros: FixedBitSet,
}

/// Extreme rays of `{y : A y >= 0}` where the rows of `A` have full rank `dim`.
pub(crate) fn extreme_rays(rows: &[IVec], dim: usize) -> Vec<IVec> {
    let m = rows.len();
    let qrows: Vec<Vec<Rat>> = rows.iter().map(|r| r.iter().map(|x| Rat::from_integer(x.clone())).collect()).collect();

    // greedy row basis
    let mut basis: Vec<usize> = Vec::with_capacity(dim);
    let mut echelon: Vec<Vec<Rat>> = Vec::new();
    for (i, r) in qrows.iter().enumerate() {
        if basis.len() == dim {
            break;
        }
        let mut cand = echelon.clone();
        cand.push(r.clone());
        let q = QMat::from_rows(&cand, dim).expect("row length");
        if rref(&q).1.len() == cand.len() {
            echelon = cand;
            basis.push(i);
        }
    }
    assert_eq!(basis.len(), dim, "double description needs a full-rank system");

    // the initial simplicial cone is spanned by the columns of the inverse of A_B
    let mut aug = QMat::zeros(dim, 2 * dim);
    for (k, &b) in basis.iter().enumerate() {
        for c in 0..dim {
            aug.set(k, c, qrows[b][c].clone());
        }
        aug.set(k, dim + k, Rat::one());
    }
    let (red, _) = rref(&aug);
    let mut rays: Vec<Ray> = (0..dim)
        .map(|j| {
            let col: Vec<Rat> = (0..dim).map(|r| red.get(r, dim + j).clone()).collect();
            let mut zeros = FixedBitSet::with_capacity(m);
            for (k, &b) in basis.iter().enumerate() {
                if k != j {
                    zeros.insert(b);
                }
            }
            Ray { v: primitive_from_rat(&col), zeros }
        })
        .collect();

    let mut in_basis = FixedBitSet::with_capacity(m);
    for &b in &basis {
        in_basis.insert(b);
    }

    for i in 0..m {
        if in_basis.contains(i) || is_zero_vec(&rows[i]) {
            continue;
        }
        let values: Vec<Int> = rays.iter().map(|r| dot(&rows[i], &r.v)).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&k| values[k].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&k| values[k].is_negative()).collect();
        if neg.is_empty() {
            for (k, r) in rays.iter_mut().enumerate() {
                if values[k].is_zero() {
                    r.zeros.insert(i);
                }
            }
            continue;
        }

        let mut fresh = Vec::new();
        for &p in &pos {
            for &n in &neg {
                let mut common = rays[p].zeros.clone();
                common.intersect_with(&rays[n].zeros);
                if common.count_ones(..) + 2 < dim {
                    continue;
                }
                let adjacent = rays.iter().enumerate().all(|(k, r)| k == p || k == n || !common.is_subset(&r.zeros));
                if !adjacent {
                    continue;
                }
                let (sp, sn) = (&values[p], -&values[n]);
                let v: IVec = rays[n].v.iter().zip(&rays[p].v).map(|(a, b)| sp * a + &sn * b).collect();
                common.insert(i);
                fresh.push(Ray { v: primitive(&v), zeros: common });
            }
        }

        let mut next: Vec<Ray> = Vec::with_capacity(pos.len() + fresh.len());
        for (k, mut r) in rays.into_iter().enumerate() {
            if values[k].is_positive() {
                next.push(r);
            } else if values[k].is_zero() {
                r.zeros.insert(i);
                next.push(r);
            }
        }
        next.extend(fresh);
        rays = next;
    }

    rays.into_iter().map(|r| r.v).collect()
}

/// Inequality description of `cone(generators)`:
/// `equations` vanish on the cone's span, `facets` are inner normals.
#[derive(Clone, Debug)]
pub(crate) struct ConeHRep {
    pub equations: Vec<IVec>,
    pub facets: Vec<IVec>,
}

pub(crate) fn cone_hrep(generators: &[IVec], dim: usize) -> ConeHRep {
    let gens: Vec<IVec> = generators.iter().filter(|g| !is_zero_vec(g)).cloned().collect();
    if gens.is_empty() {
        let equations =
            (0..dim).map(|i| (0..dim).map(|j| if i == j { Int::one() } else { Int::zero() }).collect()).collect();
        return ConeHRep { equations, facets: Vec::new() };
    }
    let q: Vec<Vec<Rat>> = gens.iter().map(|g| g.iter().map(|x| Rat::from_integer(x.clone())).collect()).collect();
    let gq = QMat::from_rows(&q, dim).expect("generator length");
    let equations: Vec<IVec> = nullspace(&gq).iter().map(|e| primitive_from_rat(e)).collect();
    let (_, pivots) = rref(&gq);
    let projected: Vec<IVec> = gens.iter().map(|g| pivots.iter().map(|&c| g[c].clone()).collect()).collect();
    let facets = extreme_rays(&projected, pivots.len())
        .into_iter()
        .map(|z| {
            let mut full = vec![Int::zero(); dim];
            for (k, &c) in pivots.iter().enumerate() {
                full[c] = z[k].clone();
            }
            full
        })
        .collect();
    ConeHRep { equations, facets }
}
