//! Rational polyhedral cones and fans stored by their maximal cones.

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exactlin::{determinant, dot, is_zero_vec, primitive, to_q, IMat, IVec, QVec, Rat};
use crate::polytope::dd::{cone_hrep, ConeHRep};
use crate::polytope::Polytope;

/// A cone spanned by primitive integer generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cone {
    generators: Vec<IVec>,
}

impl Cone {
    /// Normalizes generators to primitive vectors; zero generators are dropped.
    pub fn new(generators: &[IVec]) -> Self {
        let mut gens: Vec<IVec> = generators.iter().filter(|g| !is_zero_vec(g)).map(|g| primitive(g)).collect();
        gens.sort();
        gens.dedup();
        Cone { generators: gens }
    }

    pub fn generators(&self) -> &[IVec] {
        &self.generators
    }

    fn hrep(&self, dim: usize) -> ConeHRep {
        cone_hrep(&self.generators, dim)
    }
}

fn hrep_contains(h: &ConeHRep, v: &[Rat]) -> bool {
    h.equations.iter().all(|e| dot(&to_q(e), v).is_zero()) && h.facets.iter().all(|f| !dot(&to_q(f), v).is_negative())
}

/// Whether `v` is a nonnegative combination of the cone's generators.
pub fn cone_contains(c: &Cone, v: &[Rat]) -> bool {
    if is_zero_vec(v) {
        return true;
    }
    if c.generators.is_empty() {
        return false;
    }
    hrep_contains(&c.hrep(v.len()), v)
}

/// `|det| = 1` on exactly `n` generators.
pub fn is_unimodular(c: &Cone, n: usize) -> bool {
    if c.generators.len() != n {
        return false;
    }
    let m = IMat::from_rows(&c.generators, n).expect("generator length");
    determinant(&m).map(|d| d.abs().is_one()).unwrap_or(false)
}

/// A fan: a sorted list of primitive rays and maximal cones as ray-index lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fan {
    dim: usize,
    rays: Vec<IVec>,
    cones: Vec<Vec<usize>>,
}

impl Fan {
    /// Builds a fan from maximal cones given by their generators.
    pub fn from_cones(dim: usize, cones: &[Vec<IVec>]) -> Result<Self> {
        let mut rays: Vec<IVec> = Vec::new();
        for c in cones {
            for g in c {
                if g.len() != dim {
                    return Err(Error::Dimension("cone generator has the wrong length".into()));
                }
                if !is_zero_vec(g) {
                    rays.push(primitive(g));
                }
            }
        }
        rays.sort();
        rays.dedup();
        let mut out: Vec<Vec<usize>> = cones
            .iter()
            .map(|c| {
                let mut idx: Vec<usize> = c
                    .iter()
                    .filter(|g| !is_zero_vec(g))
                    .map(|g| rays.binary_search(&primitive(g)).expect("ray present"))
                    .collect();
                idx.sort_unstable();
                idx.dedup();
                idx
            })
            .collect();
        out.sort();
        out.dedup();
        Ok(Fan { dim, rays, cones: out })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rays(&self) -> &[IVec] {
        &self.rays
    }

    /// Maximal cones as sorted indices into [`Fan::rays`].
    pub fn cones(&self) -> &[Vec<usize>] {
        &self.cones
    }

    pub fn cone(&self, i: usize) -> Cone {
        Cone::new(&self.cone_generators(i))
    }

    pub fn cone_generators(&self, i: usize) -> Vec<IVec> {
        self.cones[i].iter().map(|&r| self.rays[r].clone()).collect()
    }

    /// Indices of maximal cones containing `v`.
    pub fn cones_containing(&self, v: &[Rat]) -> Vec<usize> {
        (0..self.cones.len()).filter(|&i| cone_contains(&self.cone(i), v)).collect()
    }

    /// Indices of maximal cones with `v` in their relative interior (strictly inside every facet).
    pub fn cones_with_interior_point(&self, v: &[Rat]) -> Vec<usize> {
        (0..self.cones.len())
            .filter(|&i| {
                let h = self.cone(i).hrep(self.dim);
                h.equations.iter().all(|e| dot(&to_q(e), v).is_zero())
                    && h.facets.iter().all(|f| dot(&to_q(f), v).is_positive())
            })
            .collect()
    }

    pub fn is_simplicial(&self) -> bool {
        (0..self.cones.len()).all(|i| {
            let gens = self.cone_generators(i);
            crate::exactlin::lattice_rank(&IMat::from_rows(&gens, self.dim).expect("length")) == gens.len()
        })
    }

    pub fn is_unimodular(&self) -> bool {
        (0..self.cones.len()).all(|i| is_unimodular(&self.cone(i), self.dim))
    }
}

/// Inner normal fan: one maximal cone per vertex, spanned by the normals of the facets through it.
pub fn normal_fan(p: &Polytope) -> Result<Fan> {
    if !p.is_full_dimensional() {
        return Err(Error::domain("normal fan of a lower-dimensional polytope"));
    }
    let mut per_vertex: Vec<Vec<IVec>> = vec![Vec::new(); p.vertices().len()];
    for (f, verts) in p.incidence.iter().enumerate() {
        for &v in verts {
            per_vertex[v].push(p.facets()[f].normal.clone());
        }
    }
    Fan::from_cones(p.ambient_dim(), &per_vertex)
}

/// Outcome of a refinement check, with the container of each finer cone.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Refinement {
    pub holds: bool,
    pub rays_equal: bool,
    /// For each maximal cone of the finer fan, a maximal cone of the coarser fan containing it.
    pub containers: Vec<Option<usize>>,
}

impl Refinement {
    /// First finer cone that lies in no coarser cone.
    pub fn witness(&self) -> Option<usize> {
        self.containers.iter().position(Option::is_none)
    }
}

/// Whether `fine` refines `coarse`: equal rays, and every maximal cone of `fine` lies in one of `coarse`.
pub fn refines(fine: &Fan, coarse: &Fan) -> Result<Refinement> {
    if fine.dim != coarse.dim {
        return Err(Error::Dimension("fans live in different dimensions".into()));
    }
    let hreps: Vec<ConeHRep> = (0..coarse.cones.len()).map(|j| coarse.cone(j).hrep(coarse.dim)).collect();
    let containers: Vec<Option<usize>> = (0..fine.cones.len())
        .into_par_iter()
        .map(|i| {
            let gens: Vec<QVec> = fine.cone_generators(i).iter().map(|g| to_q(g)).collect();
            hreps.iter().position(|h| gens.iter().all(|g| hrep_contains(h, g)))
        })
        .collect();
    let rays_equal = fine.rays == coarse.rays;
    let holds = rays_equal && containers.iter().all(Option::is_some);
    Ok(Refinement { holds, rays_equal, containers })
}

/// Same maximal cones, compared as sets of rays.
pub fn fans_equal(a: &Fan, b: &Fan) -> Result<bool> {
    if a.dim != b.dim {
        return Err(Error::Dimension("fans live in different dimensions".into()));
    }
    Ok(a.rays == b.rays && a.cones == b.cones)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::{ivec, qvec};
    use crate::polytope::hull;

    #[test]
    fn containment() {
        let c = Cone::new(&[ivec(&[1, 0]), ivec(&[0, 1])]);
        assert!(cone_contains(&c, &qvec(&[0, 0])));
        assert!(cone_contains(&c, &qvec(&[1, 0])));
        assert!(cone_contains(&c, &qvec(&[2, 3])));
        assert!(!cone_contains(&c, &qvec(&[-1, 0])));
        let ray = Cone::new(&[ivec(&[1, 1])]);
        assert!(cone_contains(&ray, &qvec(&[3, 3])));
        assert!(!cone_contains(&ray, &qvec(&[3, 2])));
    }

    #[test]
    fn unimodularity() {
        assert!(is_unimodular(&Cone::new(&[ivec(&[1, 0]), ivec(&[0, 1])]), 2));
        assert!(!is_unimodular(&Cone::new(&[ivec(&[1, 0]), ivec(&[1, 2])]), 2));
        assert!(!is_unimodular(&Cone::new(&[ivec(&[1, 0])]), 2));
    }

    #[test]
    fn square_normal_fan() {
        let sq = hull(&[qvec(&[0, 0]), qvec(&[1, 0]), qvec(&[0, 1]), qvec(&[1, 1])]).unwrap();
        let f = normal_fan(&sq).unwrap();
        assert_eq!(f.rays().len(), 4);
        assert_eq!(f.cones().len(), 4);
        assert!(f.is_unimodular());
        assert!(refines(&f, &f).unwrap().holds);
        assert!(fans_equal(&f, &f).unwrap());
        let seg = hull(&[qvec(&[0]), qvec(&[1])]).unwrap();
        let g = normal_fan(&seg).unwrap();
        assert_eq!(g.rays(), &[ivec(&[-1]), ivec(&[1])]);
    }

    #[test]
    fn refinement_detects_failure() {
        // quadrants refine the half-plane fan only if rays agree
        let quadrants = Fan::from_cones(
            2,
            &[
                vec![ivec(&[1, 0]), ivec(&[0, 1])],
                vec![ivec(&[0, 1]), ivec(&[-1, 0])],
                vec![ivec(&[-1, 0]), ivec(&[0, -1])],
                vec![ivec(&[0, -1]), ivec(&[1, 0])],
            ],
        )
        .unwrap();
        let halves = Fan::from_cones(
            2,
            &[vec![ivec(&[1, 0]), ivec(&[-1, 0]), ivec(&[0, 1])], vec![ivec(&[1, 0]), ivec(&[-1, 0]), ivec(&[0, -1])]],
        )
        .unwrap();
        let r = refines(&quadrants, &halves).unwrap();
        assert!(r.holds);
        let back = refines(&halves, &quadrants).unwrap();
        assert!(!back.holds);
        assert_eq!(back.witness(), Some(0));
    }
}
