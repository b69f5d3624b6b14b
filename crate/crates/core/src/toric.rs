//! Fan-level toric invariants of face fans of root polytopes: small resolutions,
//! divisor lattices, Picard and class groups, the canonical poset extension and
//! quiver superpotentials.

use std::collections::{BTreeMap, HashSet};
use std::fmt::Write as _;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exactlin::{
    determinant, dot, image_basis, lattice_coordinates, nullspace, primitive_from_rat, rank_q, rref, smith_normal_form,
    to_q, IMat, IVec, Int, QMat, QVec, Rat,
};
use crate::facets::{face_fan, facet_components, facet_labelings};
use crate::fans::Fan;
use crate::polytope::{simplex_normalized_volume, HPolytope, Inequality, VPolytope};
use crate::poset::{hasse_quiver, max_extension, FinitePoset, RankStatus, StarredPoset};
use crate::quiver::{union_find_classes, StarredQuiver, Vertex};

/// Coefficients `c_a` of the Weil divisor `Σ c_a D_a`, one per arrow.
pub type DivisorVector = IVec;

/// A refinement of a face fan into simplicial cones, using only the fan's rays.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Triangulation {
    pub dim: usize,
    pub rays: Vec<IVec>,
    /// Maximal cones as sorted ray indices.
    pub cones: Vec<Vec<usize>>,
    /// For each cone, the face-fan cone it subdivides.
    pub parent: Vec<usize>,
    /// Face-fan cones that were split into more than one piece.
    pub subdivided: Vec<usize>,
}

impl Triangulation {
    pub fn fan(&self) -> Result<Fan> {
        let cones: Vec<Vec<IVec>> =
            self.cones.iter().map(|c| c.iter().map(|&r| self.rays[r].clone()).collect()).collect();
        Fan::from_cones(self.dim, &cones)
    }

    pub fn is_unimodular(&self) -> bool {
        self.cones.iter().all(|c| cone_determinant(&self.rays, c, self.dim).is_some_and(|d| d.abs().is_one()))
    }
}

fn cone_determinant(rays: &[IVec], cone: &[usize], dim: usize) -> Option<Int> {
    if cone.len() != dim {
        return None;
    }
    let rows: Vec<IVec> = cone.iter().map(|&r| rays[r].clone()).collect();
    determinant(&IMat::from_rows(&rows, dim).ok()?).ok()
}

/// Signs of `det(facet, x)` computed in coordinates of the span of `placed`.
struct SpanChart {
    pivots: Vec<usize>,
}

impl SpanChart {
    fn new(rays: &[IVec], placed: &[usize], dim: usize) -> Self {
        let rows: Vec<QVec> = placed.iter().map(|&r| to_q(&rays[r])).collect();
        let (_, pivots) = rref(&QMat::from_rows(&rows, dim).expect("ray length"));
        SpanChart { pivots }
    }

    fn side(&self, rays: &[IVec], facet: &[usize], x: &IVec) -> Int {
        let project = |v: &IVec| -> IVec { self.pivots.iter().map(|&j| v[j].clone()).collect() };
        let mut rows: Vec<IVec> = facet.iter().map(|&r| project(&rays[r])).collect();
        rows.push(project(x));
        let m = IMat::from_rows(&rows, self.pivots.len()).expect("square");
        determinant(&m).expect("square").signum()
    }
}

/// Placing triangulation of the cone over `order` (in that order), using no new rays.
fn place_cone(rays: &[IVec], order: &[usize], dim: usize) -> Vec<Vec<usize>> {
    let mut simplices: Vec<Vec<usize>> = Vec::new();
    let mut placed: Vec<usize> = Vec::new();
    let mut span = 0;
    for &r in order {
        placed.push(r);
        let rows: Vec<QVec> = placed.iter().map(|&p| to_q(&rays[p])).collect();
        let new_span = rank_q(&QMat::from_rows(&rows, dim).expect("ray length"));
        if simplices.is_empty() {
            simplices.push(vec![r]);
        } else if new_span > span {
            // pyramid over everything placed so far
            for s in &mut simplices {
                s.push(r);
            }
        } else {
            let chart = SpanChart::new(rays, &placed, dim);
            let mut faces: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
            for s in &simplices {
                for (i, &opposite) in s.iter().enumerate() {
                    let mut f = s.clone();
                    f.remove(i);
                    f.sort_unstable();
                    faces.entry(f).or_default().push(opposite);
                }
            }
            let mut added = Vec::new();
            for (f, opp) in faces {
                if opp.len() != 1 {
                    continue;
                }
                let inside = chart.side(rays, &f, &rays[opp[0]]);
                let new = chart.side(rays, &f, &rays[r]);
                if !new.is_zero() && new != inside {
                    let mut s = f;
                    s.push(r);
                    added.push(s);
                }
            }
            simplices.extend(added);
        }
        span = new_span;
    }
    for s in &mut simplices {
        s.sort_unstable();
    }
    simplices.sort();
    simplices
}

/// Triangulates every maximal cone of the face fan of `Root(q)` without new rays.
///
/// Each cone is triangulated by placing its rays in index order. Every resulting
/// cone is checked to be unimodular; a failure is reported as an invariant error.
pub fn small_resolution_fan(q: &StarredQuiver) -> Result<Triangulation> {
    let fan = face_fan(q)?;
    let dim = fan.dim();
    let rays = fan.rays().to_vec();
    let pieces: Vec<Vec<Vec<usize>>> = fan.cones().par_iter().map(|c| place_cone(&rays, c, dim)).collect();
    let mut cones = Vec::new();
    let mut parent = Vec::new();
    let mut subdivided = Vec::new();
    for (i, ps) in pieces.into_iter().enumerate() {
        if ps.len() > 1 {
            subdivided.push(i);
        }
        for c in ps {
            match cone_determinant(&rays, &c, dim) {
                Some(d) if d.abs().is_one() => {}
                other => {
                    return Err(Error::invariant(format!("cone {:?} of the refinement has determinant {:?}", c, other)))
                }
            }
            cones.push(c);
            parent.push(i);
        }
    }
    Ok(Triangulation { dim, rays, cones, parent, subdivided })
}

/// A triangulation of `Root(q)`: point 0 is the origin, point `i + 1` is ray `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootTriangulation {
    pub points: Vec<IVec>,
    pub simplices: Vec<Vec<usize>>,
}

/// Cones over the unimodular refinement, closed off at the origin.
pub fn unimodular_triangulation(q: &StarredQuiver) -> Result<RootTriangulation> {
    let t = small_resolution_fan(q)?;
    let mut points = vec![vec![Int::zero(); t.dim]];
    points.extend(t.rays.iter().cloned());
    let simplices: Vec<Vec<usize>> =
        t.cones.iter().map(|c| std::iter::once(0).chain(c.iter().map(|&r| r + 1)).collect()).collect();
    for s in &simplices {
        let verts: Vec<QVec> = s.iter().map(|&i| to_q(&points[i])).collect();
        let refs: Vec<&QVec> = verts.iter().collect();
        if !simplex_normalized_volume(&refs)?.is_one() {
            return Err(Error::invariant(format!("simplex {s:?} is not unimodular")));
        }
    }
    Ok(RootTriangulation { points, simplices })
}

/// A finitely generated abelian group `A / B`, with `B ⊆ A ⊆ Z^ambient`.
///
/// Rank and torsion come from the Smith normal form of `B` written in a basis of `A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticePresentation {
    ambient: usize,
    generators: Vec<IVec>,
    relations: Vec<IVec>,
    rank: usize,
    torsion: Vec<Int>,
    transform: IMat,
    basis_from_classes: IMat,
    moduli: Vec<Int>,
}

impl LatticePresentation {
    /// The lattice spanned by `generators` (no relations).
    pub fn lattice(ambient: usize, generators: &[IVec]) -> Result<Self> {
        Self::quotient(ambient, generators, &[])
    }

    /// `span(generators) / span(relations)`; the relations must lie in the numerator.
    pub fn quotient(ambient: usize, generators: &[IVec], relations: &[IVec]) -> Result<Self> {
        let basis = lattice_basis(ambient, generators)?;
        let r = basis.len();
        let mut coords = Vec::with_capacity(relations.len());
        for rel in relations {
            if rel.len() != ambient {
                return Err(Error::Dimension("relation has the wrong length".into()));
            }
            match lattice_coordinates_or_zero(&basis, rel, ambient)? {
                Some(c) => coords.push(c),
                None => return Err(Error::invariant("relation outside the numerator lattice")),
            }
        }
        let (transform, basis_from_classes, moduli) = if coords.is_empty() || r == 0 {
            (IMat::identity(r), IMat::identity(r), vec![Int::zero(); r])
        } else {
            let rel = IMat::from_columns(&coords, r)?;
            let snf = smith_normal_form(&rel);
            let mut moduli = snf.invariant_factors();
            moduli.resize(r, Int::zero());
            (snf.u, snf.u_inv, moduli)
        };
        let rank = moduli.iter().filter(|m| m.is_zero()).count();
        let torsion = moduli.iter().filter(|m| *m > &Int::one()).cloned().collect();
        let relations = relations.to_vec();
        Ok(LatticePresentation {
            ambient,
            generators: basis,
            relations,
            rank,
            torsion,
            transform,
            basis_from_classes,
            moduli,
        })
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    /// A basis of the numerator lattice.
    pub fn generators(&self) -> &[IVec] {
        &self.generators
    }

    pub fn relations(&self) -> &[IVec] {
        &self.relations
    }

    /// Rank of the free part.
    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Invariant factors greater than 1.
    pub fn torsion(&self) -> &[Int] {
        &self.torsion
    }

    pub fn is_free(&self) -> bool {
        self.torsion.is_empty()
    }

    /// Whether `v` lies in the numerator lattice.
    pub fn contains(&self, v: &[Int]) -> bool {
        v.len() == self.ambient
            && lattice_coordinates_or_zero(&self.generators, v, self.ambient).ok().flatten().is_some()
    }

    /// Moduli of the nontrivial cyclic factors, in the order used by [`Self::class_of`]; 0 means free.
    pub fn class_moduli(&self) -> Vec<Int> {
        self.moduli.iter().filter(|m| !m.is_one()).cloned().collect()
    }

    /// Coordinates of the class of `v` in the cyclic decomposition, torsion parts reduced.
    pub fn class_of(&self, v: &[Int]) -> Result<IVec> {
        if v.len() != self.ambient {
            return Err(Error::Dimension("vector has the wrong length".into()));
        }
        let c = lattice_coordinates_or_zero(&self.generators, v, self.ambient)?
            .ok_or_else(|| Error::domain("vector is not in the numerator lattice"))?;
        let y = self.transform.mul_vec(&c)?;
        Ok(y.into_iter()
            .zip(&self.moduli)
            .filter(|(_, m)| !m.is_one())
            .map(|(x, m)| if m.is_zero() { x } else { x.mod_floor(m) })
            .collect())
    }

    /// Ambient vectors whose classes are the standard generators of the cyclic factors.
    pub fn class_generators(&self) -> Vec<IVec> {
        let r = self.generators.len();
        (0..r)
            .filter(|&i| !self.moduli[i].is_one())
            .map(|i| {
                let col = self.basis_from_classes.column(i);
                let mut v = vec![Int::zero(); self.ambient];
                for (k, b) in self.generators.iter().enumerate() {
                    for (x, y) in v.iter_mut().zip(b) {
                        *x += &col[k] * y;
                    }
                }
                v
            })
            .collect()
    }
}

fn lattice_basis(ambient: usize, generators: &[IVec]) -> Result<Vec<IVec>> {
    if generators.iter().any(|g| g.len() != ambient) {
        return Err(Error::Dimension("generator has the wrong length".into()));
    }
    if generators.is_empty() {
        return Ok(Vec::new());
    }
    Ok(image_basis(&IMat::from_columns(generators, ambient)?))
}

fn lattice_coordinates_or_zero(basis: &[IVec], v: &[Int], ambient: usize) -> Result<Option<IVec>> {
    if basis.is_empty() {
        return Ok(v.iter().all(Zero::is_zero).then(Vec::new));
    }
    debug_assert_eq!(v.len(), ambient);
    lattice_coordinates(basis, v)
}

fn vertex_labeling_image(q: &StarredQuiver, vertices: &[usize]) -> Vec<IVec> {
    vertices
        .iter()
        .map(|&v| {
            q.arrows()
                .iter()
                .map(|a| {
                    let h = (q.vertex_index(a.head) == v) as i64;
                    let t = (q.vertex_index(a.tail) == v) as i64;
                    Int::from(h - t)
                })
                .collect()
        })
        .collect()
}

/// `M_Q`: integral 0-sum arrow labelings, spanned by the labelings of the unit bullet labelings.
pub fn zero_sum_lattice(q: &StarredQuiver) -> Result<LatticePresentation> {
    q.require_strongly_connected()?;
    let gens = vertex_labeling_image(q, &(0..q.dim()).collect::<Vec<_>>());
    LatticePresentation::lattice(q.arrows().len(), &gens)
}

/// `C_Q`: labelings `c_a = ℓ(head) − ℓ(tail)` for arbitrary integer values on all vertices.
pub fn independent_sum_lattice(q: &StarredQuiver) -> Result<LatticePresentation> {
    q.require_strongly_connected()?;
    let nv = q.dim() + q.starred_vertices().len();
    let gens = vertex_labeling_image(q, &(0..nv).collect::<Vec<_>>());
    LatticePresentation::lattice(q.arrows().len(), &gens)
}

/// Linear conditions `Σ k_a c_a = 0` cutting out the Cartier divisors.
///
/// For each facet labeling, the linear relations among the points on the facet
/// (cycles of the −1 subquiver with stars identified) must also hold for `c`.
/// The result is a linearly independent subset, each row primitive with its
/// first nonzero entry positive, sorted by support size.
pub fn cartier_conditions(q: &StarredQuiver) -> Result<Vec<IVec>> {
    let labelings = facet_labelings(q)?;
    let n = q.dim();
    let arrows = q.arrows().len();
    let mut all: Vec<IVec> = labelings
        .par_iter()
        .flat_map_iter(|f| {
            let cols: Vec<QVec> = f.on_facet.iter().map(|&a| to_q(&q.arrow_point(a))).collect();
            let m = QMat::from_columns(&cols, n).expect("point length");
            nullspace(&m)
                .into_iter()
                .map(|k| {
                    let k = primitive_from_rat(&k);
                    let mut row = vec![Int::zero(); arrows];
                    for (&a, x) in f.on_facet.iter().zip(k) {
                        row[a] = x;
                    }
                    normalize_sign(row)
                })
                .collect::<Vec<_>>()
        })
        .collect();
    all.sort_by(|a, b| support(a).cmp(&support(b)).then_with(|| b.cmp(a)));
    all.dedup();
    let mut chosen: Vec<IVec> = Vec::new();
    for row in all {
        let mut trial: Vec<QVec> = chosen.iter().map(|r| to_q(r)).collect();
        trial.push(to_q(&row));
        if rank_q(&QMat::from_rows(&trial, arrows)?) == trial.len() {
            chosen.push(row);
        }
    }
    Ok(chosen)
}

fn support(v: &[Int]) -> usize {
    v.iter().filter(|x| !x.is_zero()).count()
}

fn normalize_sign(v: IVec) -> IVec {
    match v.iter().find(|x| !x.is_zero()) {
        Some(x) if x.is_negative() => v.into_iter().map(|x| -x).collect(),
        _ => v,
    }
}

/// Renders `Σ k_a c_a = 0` as `c_0 + c_1 = c_4 + c_6`, positive terms on the left.
pub fn condition_text(k: &[Int]) -> String {
    let side = |positive: bool| -> String {
        let terms: Vec<String> = k
            .iter()
            .enumerate()
            .filter(|(_, x)| if positive { x.is_positive() } else { x.is_negative() })
            .map(|(a, x)| {
                let c = x.abs();
                if c.is_one() {
                    format!("c_{a}")
                } else {
                    format!("{c} c_{a}")
                }
            })
            .collect();
        if terms.is_empty() {
            "0".to_string()
        } else {
            terms.join(" + ")
        }
    };
    format!("{} = {}", side(true), side(false))
}

/// Cartier divisors as a sublattice of `Z^Arr`.
pub fn cartier_lattice(q: &StarredQuiver) -> Result<LatticePresentation> {
    let arrows = q.arrows().len();
    let conditions = cartier_conditions(q)?;
    let gens = if conditions.is_empty() {
        (0..arrows)
            .map(|a| {
                let mut e = vec![Int::zero(); arrows];
                e[a] = Int::one();
                e
            })
            .collect()
    } else {
        crate::exactlin::integer_kernel(&IMat::from_rows(&conditions, arrows)?)
    };
    LatticePresentation::lattice(arrows, &gens)
}

/// Whether `Σ c_a D_a` is Cartier: on every facet, `u_a ↦ c_a` extends to a linear functional.
pub fn is_cartier(q: &StarredQuiver, c: &[Int]) -> Result<bool> {
    if c.len() != q.arrows().len() {
        return Err(Error::Dimension("divisor has the wrong length".into()));
    }
    let n = q.dim();
    let labelings = facet_labelings(q)?;
    let ok: Result<Vec<bool>> = labelings
        .par_iter()
        .map(|f| {
            let rows: Vec<QVec> = f.on_facet.iter().map(|&a| to_q(&q.arrow_point(a))).collect();
            let rhs: QVec = f.on_facet.iter().map(|&a| Rat::from_integer(c[a].clone())).collect();
            Ok(crate::exactlin::solve_rational(&QMat::from_rows(&rows, n)?, &rhs)?.is_some())
        })
        .collect();
    Ok(ok?.into_iter().all(|b| b))
}

/// `Cartier / M_Q`, valid for every strongly connected quiver.
pub fn picard_group_general(q: &StarredQuiver) -> Result<LatticePresentation> {
    let m = zero_sum_lattice(q)?;
    let cart = cartier_lattice(q)?;
    LatticePresentation::quotient(q.arrows().len(), cart.generators(), m.generators())
}

/// `Z^Arr / M_Q`.
pub fn class_group(q: &StarredQuiver) -> Result<LatticePresentation> {
    let m = zero_sum_lattice(q)?;
    let arrows = q.arrows().len();
    let units: Vec<IVec> = (0..arrows)
        .map(|a| {
            let mut e = vec![Int::zero(); arrows];
            e[a] = Int::one();
            e
        })
        .collect();
    LatticePresentation::quotient(arrows, &units, m.generators())
}

/// Picard group computed as `C_Q / M_Q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Picard {
    pub group: LatticePresentation,
    /// `D_j = Σ_{a → ★_j} D_a` for each star with incoming arrows.
    pub generators: Vec<DivisorVector>,
    /// Set when `C_Q` differs from the Cartier lattice, so the quotient is not the Picard group.
    pub warning: Option<String>,
}

/// `C_Q / M_Q`, which is the Picard group for quivers of canonical extensions.
///
/// For other quivers the group is still returned, with a warning when `C_Q` is
/// not the Cartier lattice.
pub fn picard_group(q: &StarredQuiver) -> Result<Picard> {
    let m = zero_sum_lattice(q)?;
    let c = independent_sum_lattice(q)?;
    let cart = cartier_lattice(q)?;
    let same = c.generators().iter().all(|g| cart.contains(g)) && cart.generators().iter().all(|g| c.contains(g));
    let warning = (!same).then(|| {
        "independent-sum labelings differ from Cartier divisors; C_Q/M_Q is not the Picard group of this quiver"
            .to_string()
    });
    let group = LatticePresentation::quotient(q.arrows().len(), c.generators(), m.generators())?;
    Ok(Picard { group, generators: sink_star_divisors(q), warning })
}

/// `D_j = Σ_{a → ★_j} D_a` for every star that is the head of some arrow, in star order.
pub fn sink_star_divisors(q: &StarredQuiver) -> Vec<DivisorVector> {
    (0..q.starred_vertices().len())
        .filter_map(|s| {
            let d: IVec = q.arrows().iter().map(|a| Int::from((a.head == Vertex::Star(s)) as i64)).collect();
            d.iter().any(|x| !x.is_zero()).then_some(d)
        })
        .collect()
}

/// Largest `d` such that the anticanonical class `Σ_a D_a` is divisible by `d` in the Picard group.
pub fn fano_index(q: &StarredQuiver) -> Result<Int> {
    let pic = picard_group_general(q)?;
    let k: IVec = vec![Int::one(); q.arrows().len()];
    let y = pic.class_of(&k)?;
    let moduli = pic.class_moduli();
    let g = y.iter().zip(&moduli).filter(|(_, m)| m.is_zero()).fold(Int::zero(), |g, (x, _)| g.gcd(x));
    if g.is_zero() {
        return Err(Error::invariant("anticanonical class is torsion"));
    }
    let divides = |d: &Int| {
        y.iter().zip(&moduli).all(|(x, m)| if m.is_zero() { x.is_multiple_of(d) } else { x.is_multiple_of(&d.gcd(m)) })
    };
    let mut d = g.clone();
    while d > Int::one() {
        if g.is_multiple_of(&d) && divides(&d) {
            return Ok(d);
        }
        d -= 1;
    }
    Ok(Int::one())
}

/// `P̄` together with the classes of maximal elements whose tops were identified.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalExtension {
    pub poset: StarredPoset,
    /// Maximal elements of `P` (indices into `P`) sharing one adjoined top.
    pub classes: Vec<Vec<usize>>,
}

/// Quotient of `P_max` identifying tops whose stars share a facet component of some facet labeling.
pub fn canonical_extension(p: &FinitePoset) -> Result<CanonicalExtension> {
    if p.rank_status() != RankStatus::Ranked {
        return Err(Error::domain("canonical extension needs a ranked poset"));
    }
    let ranks = p.rank_function().expect("ranked").ranks;
    let maxima = p.maximal();
    let sp = max_extension(p);
    let q = hasse_quiver(&sp)?;
    let labelings = facet_labelings(&q)?;
    // star 0 is the bottom; star k + 1 sits above maxima[k]
    let pairs: Vec<(usize, usize)> = labelings
        .par_iter()
        .flat_map_iter(|f| {
            facet_components(&q, f)
                .into_iter()
                .flat_map(|c| {
                    let tops: Vec<usize> = c.stars().into_iter().filter(|&s| s > 0).map(|s| s - 1).collect();
                    tops.windows(2).map(|w| (w[0], w[1])).collect::<Vec<_>>()
                })
                .collect::<Vec<_>>()
        })
        .collect();
    for &(a, b) in &pairs {
        if ranks[maxima[a]] != ranks[maxima[b]] {
            return Err(Error::invariant(format!(
                "tops above {} and {} share a facet component but have different ranks",
                p.elements()[maxima[a]],
                p.elements()[maxima[b]]
            )));
        }
    }
    let class = union_find_classes(maxima.len(), pairs);
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (k, &m) in maxima.iter().enumerate() {
        groups.entry(class[k]).or_default().push(m);
    }
    let classes: Vec<Vec<usize>> = groups.into_values().collect();

    let mut taken: HashSet<String> = sp.poset.elements().iter().cloned().collect();
    let bot = sp.poset.elements()[0].clone();
    let mut elements = vec![bot];
    elements.extend(p.elements().iter().cloned());
    let mut covers: Vec<(usize, usize)> = p.covers().iter().map(|&(a, b)| (a + 1, b + 1)).collect();
    covers.extend(p.minimal().into_iter().map(|m| (0, m + 1)));
    let mut stars = vec![0];
    for cls in &classes {
        let joined: Vec<&str> = cls.iter().map(|&m| p.elements()[m].as_str()).collect();
        let mut name = format!("top_{}", joined.join("~"));
        if cls.len() > 1 {
            while taken.contains(&name) {
                name.push('\'');
            }
        } else {
            // a singleton class keeps the name it had in the maximal extension
            name =
                sp.poset.elements()[sp.stars()[1 + maxima.iter().position(|&m| m == cls[0]).expect("maximal")]].clone();
        }
        taken.insert(name.clone());
        let idx = elements.len();
        stars.push(idx);
        covers.extend(cls.iter().map(|&m| (m + 1, idx)));
        elements.push(name);
    }
    let poset = FinitePoset::from_indices(elements, covers)?;
    Ok(CanonicalExtension { poset: StarredPoset::new(poset, stars)?, classes })
}

/// The value a star contributes to the superpotential.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Weight {
    One,
    /// The quantum parameter `q_{i+1}`.
    Param(usize),
}

/// One monomial `Π q_i^{params_i} Π x_j^{exponents_j}` with coefficient 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LaurentTerm {
    pub params: IVec,
    pub exponents: IVec,
}

/// A Laurent polynomial in `x_1..x_n` with polynomial coefficients in `q_1..q_d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuiverLaurent {
    pub nparams: usize,
    pub nvars: usize,
    pub terms: Vec<LaurentTerm>,
}

impl QuiverLaurent {
    /// Text form, e.g. `x_1 + x_2/x_1 + q_1/x_4`.
    pub fn text(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        self.terms.iter().map(term_text).collect::<Vec<_>>().join(" + ")
    }

    /// Parses a sum of monomials such as `x_1 + x_2/x_1 + q_1/x_4 + 1/x_3`.
    ///
    /// Factors are `x_i` or `q_i` (1-based) with optional `^k`, joined by `*`; a
    /// monomial may have one `/` separating numerator and denominator. Every
    /// coefficient is 1.
    pub fn parse(text: &str, nvars: usize) -> Result<Self> {
        let mut raw: Vec<Vec<(char, usize, i64)>> = Vec::new();
        for term in text.split('+') {
            let term = term.trim();
            if term.is_empty() {
                return Err(Error::invalid(format!("empty term in {text:?}")));
            }
            let (num, den) = match term.split_once('/') {
                Some((n, d)) => (n, Some(d)),
                None => (term, None),
            };
            let mut factors = parse_factors(num, 1)?;
            if let Some(d) = den {
                factors.extend(parse_factors(d, -1)?);
            }
            raw.push(factors);
        }
        let nparams =
            raw.iter().flat_map(|f| f.iter()).filter(|(c, _, _)| *c == 'q').map(|&(_, i, _)| i).max().unwrap_or(0);
        let mut terms = Vec::with_capacity(raw.len());
        for factors in raw {
            let mut params = vec![Int::zero(); nparams];
            let mut exponents = vec![Int::zero(); nvars];
            for (c, i, e) in factors {
                let slot = if c == 'x' { &mut exponents } else { &mut params };
                let cell =
                    slot.get_mut(i - 1).ok_or_else(|| Error::invalid(format!("variable {c}_{i} out of range")))?;
                *cell += e;
            }
            terms.push(LaurentTerm { params, exponents });
        }
        Ok(QuiverLaurent { nparams, nvars, terms })
    }
}

fn parse_factors(s: &str, sign: i64) -> Result<Vec<(char, usize, i64)>> {
    let s = s.trim();
    if s == "1" {
        return Ok(Vec::new());
    }
    s.split('*')
        .map(|f| {
            let f = f.trim();
            let (base, exp) = match f.split_once('^') {
                Some((b, e)) => {
                    (b, e.trim().parse::<i64>().map_err(|_| Error::invalid(format!("bad exponent in {f:?}")))?)
                }
                None => (f, 1),
            };
            let mut chars = base.chars();
            let c = chars.next().filter(|c| *c == 'x' || *c == 'q');
            let idx = base.get(1..).and_then(|r| r.strip_prefix('_')).and_then(|r| r.parse::<usize>().ok());
            match (c, idx) {
                (Some(c), Some(i)) if i > 0 => Ok((c, i, sign * exp)),
                _ => Err(Error::invalid(format!("cannot parse factor {f:?}"))),
            }
        })
        .collect()
}

fn term_text(t: &LaurentTerm) -> String {
    let mut num = Vec::new();
    let mut den = Vec::new();
    let mut push = |name: String, e: &Int| {
        let power = |k: Int| if k.is_one() { name.clone() } else { format!("{name}^{k}") };
        if e.is_positive() {
            num.push(power(e.clone()));
        } else if e.is_negative() {
            den.push(power(-e.clone()));
        }
    };
    for (i, e) in t.params.iter().enumerate() {
        push(format!("q_{}", i + 1), e);
    }
    for (j, e) in t.exponents.iter().enumerate() {
        push(format!("x_{}", j + 1), e);
    }
    let top = if num.is_empty() { "1".to_string() } else { num.join("*") };
    if den.is_empty() {
        top
    } else if den.len() == 1 {
        format!("{top}/{}", den[0])
    } else {
        format!("{top}/({})", den.join("*"))
    }
}

/// Weight 1 on stars without incoming arrows, a fresh parameter on every other star.
pub fn default_weights(q: &StarredQuiver) -> Vec<Weight> {
    let mut next = 0;
    (0..q.starred_vertices().len())
        .map(|s| {
            if q.arrows().iter().any(|a| a.head == Vertex::Star(s)) {
                next += 1;
                Weight::Param(next - 1)
            } else {
                Weight::One
            }
        })
        .collect()
}

/// One "head over tail" monomial per arrow; a star contributes its weight.
pub fn superpotential(q: &StarredQuiver, weights: &[Weight]) -> Result<QuiverLaurent> {
    q.require_strongly_connected()?;
    if weights.len() != q.starred_vertices().len() {
        return Err(Error::Dimension(format!("{} weights for {} stars", weights.len(), q.starred_vertices().len())));
    }
    let nparams = weights
        .iter()
        .filter_map(|w| match w {
            Weight::Param(i) => Some(i + 1),
            Weight::One => None,
        })
        .max()
        .unwrap_or(0);
    let terms = (0..q.arrows().len())
        .map(|a| {
            let arrow = q.arrows()[a];
            let mut params = vec![Int::zero(); nparams];
            let mut bump = |v: Vertex, by: i64| {
                if let Vertex::Star(s) = v {
                    if let Weight::Param(i) = weights[s] {
                        params[i] += by;
                    }
                }
            };
            bump(arrow.head, 1);
            bump(arrow.tail, -1);
            LaurentTerm { params, exponents: q.arrow_point(a) }
        })
        .collect();
    Ok(QuiverLaurent { nparams, nvars: q.dim(), terms })
}

/// Convex hull of the exponent vectors.
pub fn newton_polytope(s: &QuiverLaurent) -> Result<VPolytope> {
    let pts: Vec<IVec> = s.terms.iter().map(|t| t.exponents.clone()).collect();
    VPolytope::from_integer_points(&pts)
}

/// `Trop(S) ≥ 0`: one inequality `Σ ℓ_i r_i + Σ m_j X_j ≥ 0` per monomial.
pub fn superpotential_polytope(s: &QuiverLaurent, r: &[Rat]) -> Result<HPolytope> {
    if r.len() != s.nparams {
        return Err(Error::Dimension(format!("{} parameter values for {} quantum parameters", r.len(), s.nparams)));
    }
    let mut ineqs = Vec::with_capacity(s.terms.len());
    for t in &s.terms {
        let offset: Rat = dot(&to_q(&t.params), r);
        let g = t.exponents.iter().fold(Int::zero(), |g, x| g.gcd(x));
        if g.is_zero() {
            if offset.is_negative() {
                return Err(Error::domain("a constant monomial has negative tropical value"));
            }
            continue;
        }
        let normal = t.exponents.iter().map(|x| x / &g).collect();
        ineqs.push(Inequality::new(normal, offset / Rat::from_integer(g)));
    }
    HPolytope::new(s.nvars, ineqs)
}

/// `P_D = {x : ⟨x, u_a⟩ ≥ −c_a}`, flagged when `D` is only Weil.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisorPolytope {
    pub polytope: HPolytope,
    pub cartier: bool,
}

pub fn divisor_polytope(q: &StarredQuiver, d: &[Int]) -> Result<DivisorPolytope> {
    let cartier = is_cartier(q, d)?;
    let ineqs =
        (0..q.arrows().len()).map(|a| Inequality::new(q.arrow_point(a), Rat::from_integer(d[a].clone()))).collect();
    Ok(DivisorPolytope { polytope: HPolytope::new(q.dim(), ineqs)?, cartier })
}

/// Renders `⟨n, X⟩ + c ≥ 0` with 1-based variables, e.g. `X_2 - X_1 >= 0` or `1 - X_6 >= 0`.
pub fn inequality_text(ineq: &Inequality, var: &str) -> String {
    let mut parts: Vec<(bool, String)> = Vec::new();
    let constant = |c: &Rat| c.abs().to_string();
    if ineq.offset.is_positive() {
        parts.push((true, constant(&ineq.offset)));
    }
    for positive in [true, false] {
        for (j, x) in ineq.normal.iter().enumerate() {
            if x.is_zero() || x.is_positive() != positive {
                continue;
            }
            let c = x.abs();
            let name = if c.is_one() { format!("{var}_{}", j + 1) } else { format!("{c}{var}_{}", j + 1) };
            parts.push((positive, name));
        }
    }
    if ineq.offset.is_negative() {
        parts.push((false, constant(&ineq.offset)));
    }
    let mut out = String::new();
    for (i, (positive, s)) in parts.iter().enumerate() {
        match (i, positive) {
            (0, true) => out.push_str(s),
            (0, false) => {
                let _ = write!(out, "-{s}");
            }
            (_, true) => {
                let _ = write!(out, " + {s}");
            }
            (_, false) => {
                let _ = write!(out, " - {s}");
            }
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out.push_str(" >= 0");
    out
}
