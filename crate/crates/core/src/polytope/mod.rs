//! Exact convex polytopes: vertex and facet descriptions, polar duality,
//! lattice points, reflexivity, face lattices, volumes and integral equivalence.

pub(crate) mod dd;

use std::collections::{HashMap, HashSet};

use fixedbitset::FixedBitSet;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactlin::{
    determinant_q, dot, image_basis, integer_kernel, is_zero_vec, lattice_coordinates, nullspace, primitive,
    primitive_from_rat, rref, smith_normal_form, to_integral, to_q, IMat, IVec, Int, QMat, QVec, Rat,
};

/// `⟨normal, x⟩ + offset ≥ 0` (or `= 0` when used as an equation).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Inequality {
    pub normal: IVec,
    pub offset: Rat,
}

impl Inequality {
    pub fn new(normal: IVec, offset: Rat) -> Self {
        Inequality { normal, offset }
    }

    /// Value of `⟨normal, x⟩ + offset`.
    pub fn eval(&self, x: &[Rat]) -> Rat {
        dot(&to_q(&self.normal), x) + &self.offset
    }

    pub fn eval_int(&self, x: &[Int]) -> Rat {
        Rat::from_integer(dot(&self.normal, x)) + &self.offset
    }

    /// Integer row `(offset, normal)` scaled by the offset's denominator.
    fn homogeneous_row(&self) -> IVec {
        let den = self.offset.denom().clone();
        let mut row = Vec::with_capacity(self.normal.len() + 1);
        row.push(self.offset.numer().clone());
        row.extend(self.normal.iter().map(|x| x * &den));
        row
    }
}

/// A polytope given by its vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VPolytope {
    dim: usize,
    vertices: Vec<QVec>,
}

impl VPolytope {
    /// Convex hull of `points`, keeping only the vertices.
    pub fn new(points: &[QVec]) -> Result<Self> {
        Ok(hull(points)?.v)
    }

    pub fn from_integer_points(points: &[IVec]) -> Result<Self> {
        let q: Vec<QVec> = points.iter().map(|p| to_q(p)).collect();
        Self::new(&q)
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[QVec] {
        &self.vertices
    }

    pub fn integer_vertices(&self) -> Option<Vec<IVec>> {
        self.vertices.iter().map(|v| to_integral(v)).collect()
    }
}

/// A polyhedron given by inequalities and (optionally) equations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HPolytope {
    dim: usize,
    inequalities: Vec<Inequality>,
    equations: Vec<Inequality>,
}

impl HPolytope {
    pub fn new(dim: usize, inequalities: Vec<Inequality>) -> Result<Self> {
        Self::with_equations(dim, inequalities, Vec::new())
    }

    pub fn with_equations(dim: usize, inequalities: Vec<Inequality>, equations: Vec<Inequality>) -> Result<Self> {
        for ineq in inequalities.iter().chain(&equations) {
            if ineq.normal.len() != dim {
                return Err(Error::Dimension(format!(
                    "inequality normal of length {} in dimension {dim}",
                    ineq.normal.len()
                )));
            }
        }
        Ok(HPolytope { dim, inequalities, equations })
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn inequalities(&self) -> &[Inequality] {
        &self.inequalities
    }

    pub fn equations(&self) -> &[Inequality] {
        &self.equations
    }

    pub fn contains(&self, x: &[Rat]) -> bool {
        self.inequalities.iter().all(|i| !i.eval(x).is_negative()) && self.equations.iter().all(|e| e.eval(x).is_zero())
    }

    pub fn contains_int(&self, x: &[Int]) -> bool {
        self.inequalities.iter().all(|i| !i.eval_int(x).is_negative())
            && self.equations.iter().all(|e| e.eval_int(x).is_zero())
    }

    /// Translate by `-u`: the result is `{x - u : x ∈ self}`.
    pub fn translate_back(&self, u: &[Rat]) -> HPolytope {
        let shift = |i: &Inequality| Inequality::new(i.normal.clone(), i.eval(u));
        HPolytope {
            dim: self.dim,
            inequalities: self.inequalities.iter().map(shift).collect(),
            equations: self.equations.iter().map(shift).collect(),
        }
    }

    /// Vertices via double description; errors when the polyhedron is unbounded.
    pub fn vertices(&self) -> Result<Vec<QVec>> {
        let d = self.dim + 1;
        let mut rows: Vec<IVec> = self.inequalities.iter().map(|i| i.homogeneous_row()).collect();
        for e in &self.equations {
            let r = e.homogeneous_row();
            rows.push(r.iter().map(|x| -x).collect());
            rows.push(r);
        }
        let mut t_row = vec![Int::zero(); d];
        t_row[0] = Int::one();
        rows.push(t_row);

        let q: Vec<QVec> = rows.iter().map(|r| to_q(r)).collect();
        let (_, pivots) = rref(&QMat::from_rows(&q, d)?);
        let lineality = pivots.len() < d;
        let projected: Vec<IVec> = rows.iter().map(|r| pivots.iter().map(|&c| r[c].clone()).collect()).collect();
        let rays = dd::extreme_rays(&projected, pivots.len());
        if lineality {
            // a nonempty polyhedron with a lineality space is unbounded
            return if rays.iter().any(|z| z[0].is_positive()) { Err(Error::Unbounded) } else { Ok(Vec::new()) };
        }
        let mut out = Vec::with_capacity(rays.len());
        for z in rays {
            if z[0].is_zero() {
                return Err(Error::Unbounded);
            }
            let t = Rat::from_integer(z[0].clone());
            out.push(z[1..].iter().map(|x| Rat::from_integer(x.clone()) / &t).collect());
        }
        out.sort();
        Ok(out)
    }

    /// All integer points; errors when unbounded.
    pub fn lattice_points(&self) -> Result<Vec<IVec>> {
        let verts = self.vertices()?;
        if verts.is_empty() {
            return Ok(Vec::new());
        }
        Ok(scan_lattice_points(self, &verts))
    }
}

/// Both descriptions of a polytope plus facet-vertex incidences.
#[derive(Clone, Debug)]
pub struct Polytope {
    pub v: VPolytope,
    pub h: HPolytope,
    /// For each facet, the indices of the vertices lying on it.
    pub incidence: Vec<Vec<usize>>,
}

impl Polytope {
    /// Irredundant description of a bounded, nonempty H-polyhedron.
    pub fn from_h(h: &HPolytope) -> Result<Self> {
        let verts = h.vertices()?;
        if verts.is_empty() {
            return Err(Error::domain("polytope is empty"));
        }
        hull(&verts)
    }

    pub fn ambient_dim(&self) -> usize {
        self.v.dim
    }

    /// Affine dimension.
    pub fn dim(&self) -> usize {
        self.v.dim - self.h.equations.len()
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.h.equations.is_empty()
    }

    pub fn vertices(&self) -> &[QVec] {
        &self.v.vertices
    }

    pub fn facets(&self) -> &[Inequality] {
        &self.h.inequalities
    }

    pub fn lattice_points(&self) -> Vec<IVec> {
        scan_lattice_points(&self.h, &self.v.vertices)
    }

    fn facet_sets(&self) -> Vec<FixedBitSet> {
        let n = self.v.vertices.len();
        self.incidence
            .iter()
            .map(|f| {
                let mut s = FixedBitSet::with_capacity(n);
                f.iter().for_each(|&i| s.insert(i));
                s
            })
            .collect()
    }
}

/// Convex hull of a nonempty point set; lower-dimensional sets keep their affine hull as equations.
pub fn hull(points: &[QVec]) -> Result<Polytope> {
    let Some(first) = points.first() else {
        return Err(Error::domain("hull of an empty point set"));
    };
    let dim = first.len();
    if points.iter().any(|p| p.len() != dim) {
        return Err(Error::Dimension("points of different lengths".into()));
    }
    let mut pts: Vec<QVec> = points.to_vec();
    pts.sort();
    pts.dedup();

    let homogeneous: Vec<IVec> = pts
        .iter()
        .map(|p| {
            let mut row = vec![Rat::one()];
            row.extend(p.iter().cloned());
            primitive_from_rat(&row)
        })
        .collect();
    let cone = dd::cone_hrep(&homogeneous, dim + 1);
    let split = |v: IVec| -> Inequality {
        let normal = primitive(&v[1..]);
        let offset = if is_zero_vec(&v[1..]) {
            Rat::from_integer(v[0].clone())
        } else {
            let g = v[1..].iter().fold(Int::zero(), |g, x| g.gcd(x));
            Rat::new(v[0].clone(), g)
        };
        Inequality::new(normal, offset)
    };
    let mut equations: Vec<Inequality> = cone.equations.into_iter().map(split).collect();
    equations.sort();
    let mut facets: Vec<Inequality> = cone.facets.into_iter().map(split).collect();
    facets.sort();

    let on: Vec<Vec<bool>> = facets.iter().map(|f| pts.iter().map(|p| f.eval(p).is_zero()).collect()).collect();
    let vertex_mask: Vec<bool> = (0..pts.len())
        .map(|i| {
            // p is a vertex iff the facets through p meet only in p
            (0..pts.len()).all(|j| j == i || (0..facets.len()).any(|f| on[f][i] && !on[f][j]))
        })
        .collect();
    let index: Vec<Option<usize>> = {
        let mut next = 0;
        vertex_mask
            .iter()
            .map(|&keep| {
                keep.then(|| {
                    next += 1;
                    next - 1
                })
            })
            .collect()
    };
    let vertices: Vec<QVec> = pts.iter().zip(&vertex_mask).filter(|(_, &k)| k).map(|(p, _)| p.clone()).collect();
    let incidence =
        on.iter().map(|row| (0..pts.len()).filter(|&i| row[i]).filter_map(|i| index[i]).collect()).collect();
    Ok(Polytope { v: VPolytope { dim, vertices }, h: HPolytope { dim, inequalities: facets, equations }, incidence })
}

fn scan_lattice_points(h: &HPolytope, verts: &[QVec]) -> Vec<IVec> {
    let dim = h.dim;
    let lo: IVec = (0..dim).map(|c| verts.iter().map(|v| v[c].ceil().to_integer()).min().unwrap()).collect();
    let hi: IVec = (0..dim).map(|c| verts.iter().map(|v| v[c].floor().to_integer()).max().unwrap()).collect();

    let mut constraints: Vec<Inequality> = h.inequalities.clone();
    for e in &h.equations {
        constraints.push(e.clone());
        constraints.push(Inequality::new(e.normal.iter().map(|x| -x).collect(), -e.offset.clone()));
    }
    // suffix[k][j]: largest possible contribution of coordinates j.. to constraint k
    let suffix: Vec<Vec<Int>> = constraints
        .iter()
        .map(|c| {
            let mut s = vec![Int::zero(); dim + 1];
            for j in (0..dim).rev() {
                let a = &c.normal[j] * &lo[j];
                let b = &c.normal[j] * &hi[j];
                s[j] = &s[j + 1] + a.max(b);
            }
            s
        })
        .collect();

    let mut out = Vec::new();
    let mut current = Vec::with_capacity(dim);
    let partial = vec![Int::zero(); constraints.len()];
    scan_rec(&constraints, &suffix, &lo, &hi, &mut current, partial, &mut out);
    out
}

fn scan_rec(
    constraints: &[Inequality],
    suffix: &[Vec<Int>],
    lo: &[Int],
    hi: &[Int],
    current: &mut IVec,
    partial: Vec<Int>,
    out: &mut Vec<IVec>,
) {
    let j = current.len();
    let feasible = constraints
        .iter()
        .enumerate()
        .all(|(k, c)| !(Rat::from_integer(&partial[k] + &suffix[k][j]) + &c.offset).is_negative());
    if !feasible {
        return;
    }
    if j == lo.len() {
        out.push(current.clone());
        return;
    }
    let mut x = lo[j].clone();
    while x <= hi[j] {
        let next: Vec<Int> = constraints.iter().enumerate().map(|(k, c)| &partial[k] + &c.normal[j] * &x).collect();
        current.push(x.clone());
        scan_rec(constraints, suffix, lo, hi, current, next, out);
        current.pop();
        x += 1;
    }
}

/// Lattice points of the convex hull of the given vertices.
pub fn lattice_points(p: &VPolytope) -> Result<Vec<IVec>> {
    Ok(hull(&p.vertices)?.lattice_points())
}

/// Polar dual `{y : ⟨x, y⟩ ≥ −1 for all x ∈ p}`.
pub fn polar_dual(p: &VPolytope) -> Result<VPolytope> {
    polar_of_facets(&hull(&p.vertices)?)
}

/// Polar dual of an H-described polytope with the origin in its interior.
pub fn polar_dual_h(h: &HPolytope) -> Result<VPolytope> {
    polar_of_facets(&Polytope::from_h(h)?)
}

fn polar_of_facets(p: &Polytope) -> Result<VPolytope> {
    if !p.is_full_dimensional() {
        return Err(Error::domain("polar dual of a lower-dimensional polytope"));
    }
    let mut dual = Vec::with_capacity(p.facets().len());
    for f in p.facets() {
        if !f.offset.is_positive() {
            return Err(Error::domain("origin is not in the interior"));
        }
        dual.push(f.normal.iter().map(|x| Rat::from_integer(x.clone()) / &f.offset).collect());
    }
    dual.sort();
    Ok(VPolytope { dim: p.v.dim, vertices: dual })
}

/// Outcome of the reflexivity test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ReflexiveCertificate {
    /// All polar-dual vertices, each integral.
    Reflexive(Vec<IVec>),
    NotFullDimensional,
    OriginNotInterior,
    FractionalDualVertex(QVec),
}

impl ReflexiveCertificate {
    pub fn holds(&self) -> bool {
        matches!(self, ReflexiveCertificate::Reflexive(_))
    }
}

pub fn is_reflexive(p: &VPolytope) -> Result<ReflexiveCertificate> {
    let full = hull(&p.vertices)?;
    if !full.is_full_dimensional() {
        return Ok(ReflexiveCertificate::NotFullDimensional);
    }
    if full.facets().iter().any(|f| !f.offset.is_positive()) {
        return Ok(ReflexiveCertificate::OriginNotInterior);
    }
    let dual = polar_of_facets(&full)?;
    let mut integral = Vec::with_capacity(dual.vertices.len());
    for v in &dual.vertices {
        match to_integral(v) {
            Some(iv) => integral.push(iv),
            None => return Ok(ReflexiveCertificate::FractionalDualVertex(v.clone())),
        }
    }
    Ok(ReflexiveCertificate::Reflexive(integral))
}

/// True iff the only lattice points are the origin and the vertices.
pub fn is_terminal(p: &VPolytope) -> Result<bool> {
    let full = hull(&p.vertices)?;
    if !full.is_full_dimensional() || full.facets().iter().any(|f| !f.offset.is_positive()) {
        return Err(Error::domain("origin is not in the interior"));
    }
    let mut expected: Vec<IVec> = match p.integer_vertices() {
        Some(v) => v,
        None => return Ok(false),
    };
    expected.push(vec![Int::zero(); p.dim]);
    expected.sort();
    Ok(full.lattice_points() == expected)
}

/// Faces of a polytope by dimension, as sets of vertex indices.
#[derive(Clone, Debug)]
pub struct FaceLattice {
    pub faces: Vec<Vec<Vec<usize>>>,
}

impl FaceLattice {
    pub fn f_vector(&self) -> Vec<usize> {
        self.faces.iter().map(Vec::len).collect()
    }
}

/// The facets of the face `face` (of dimension ≥ 1): maximal proper intersections with facets.
fn facets_of_face(face: &FixedBitSet, facets: &[FixedBitSet]) -> Vec<FixedBitSet> {
    let mut cands: Vec<FixedBitSet> = Vec::new();
    for f in facets {
        let mut c = face.clone();
        c.intersect_with(f);
        if c.count_ones(..) == 0 || c == *face {
            continue;
        }
        if !cands.contains(&c) {
            cands.push(c);
        }
    }
    cands.iter().filter(|c| !cands.iter().any(|d| d != *c && c.is_subset(d))).cloned().collect()
}

pub fn face_lattice(p: &Polytope) -> FaceLattice {
    let d = p.dim();
    let mut faces: Vec<Vec<Vec<usize>>> = vec![Vec::new(); d];
    if d == 0 {
        return FaceLattice { faces };
    }
    let facets = p.facet_sets();
    let mut level: Vec<FixedBitSet> = facets.clone();
    level.sort_by_key(|s| s.ones().collect::<Vec<_>>());
    level.dedup();
    for k in (0..d).rev() {
        faces[k] = level.iter().map(|s| s.ones().collect()).collect();
        if k == 0 {
            break;
        }
        let mut seen: HashSet<Vec<usize>> = HashSet::new();
        let mut next = Vec::new();
        for f in &level {
            for g in facets_of_face(f, &facets) {
                if seen.insert(g.ones().collect()) {
                    next.push(g);
                }
            }
        }
        next.sort_by_key(|s| s.ones().collect::<Vec<_>>());
        level = next;
    }
    FaceLattice { faces }
}

/// `(f_0, …, f_{d−1})`.
pub fn f_vector(p: &VPolytope) -> Result<Vec<usize>> {
    Ok(face_lattice(&hull(&p.vertices)?).f_vector())
}

/// Pulling triangulation of a full-dimensional polytope, as vertex-index simplices.
pub fn pulling_triangulation(p: &Polytope) -> Result<Vec<Vec<usize>>> {
    if !p.is_full_dimensional() {
        return Err(Error::domain("triangulation of a lower-dimensional polytope"));
    }
    let facets = p.facet_sets();
    let mut all = FixedBitSet::with_capacity(p.vertices().len());
    all.insert_range(..);
    let mut memo = HashMap::new();
    Ok(pull(&all, p.dim(), &facets, &mut memo))
}

fn pull(
    face: &FixedBitSet,
    dim: usize,
    facets: &[FixedBitSet],
    memo: &mut HashMap<FixedBitSet, Vec<Vec<usize>>>,
) -> Vec<Vec<usize>> {
    if let Some(t) = memo.get(face) {
        return t.clone();
    }
    let apex = face.ones().next().expect("nonempty face");
    let result = if dim == 0 {
        vec![vec![apex]]
    } else {
        let mut out = Vec::new();
        for sub in facets_of_face(face, facets) {
            if sub.contains(apex) {
                continue;
            }
            for mut s in pull(&sub, dim - 1, facets, memo) {
                s.insert(0, apex);
                out.push(s);
            }
        }
        out
    };
    memo.insert(face.clone(), result.clone());
    result
}

/// `|det(v_1 − v_0, …, v_d − v_0)|` for a full-dimensional simplex.
pub fn simplex_normalized_volume(vertices: &[&QVec]) -> Result<Rat> {
    let d = vertices.len().saturating_sub(1);
    let rows: Vec<QVec> =
        vertices[1..].iter().map(|v| v.iter().zip(vertices[0]).map(|(a, b)| a - b).collect()).collect();
    Ok(determinant_q(&QMat::from_rows(&rows, d)?)?.abs())
}

/// `d!` times the Euclidean volume of a full-dimensional polytope.
pub fn normalized_volume(p: &Polytope) -> Result<Rat> {
    let mut total = Rat::zero();
    for s in pulling_triangulation(p)? {
        let verts: Vec<&QVec> = s.iter().map(|&i| &p.vertices()[i]).collect();
        total += simplex_normalized_volume(&verts)?;
    }
    Ok(total)
}

/// `x ↦ linear·x + translation`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineMap {
    pub linear: QMat,
    pub translation: QVec,
}

impl AffineMap {
    pub fn linear(linear: QMat) -> Self {
        let translation = vec![Rat::zero(); linear.rows()];
        AffineMap { linear, translation }
    }

    pub fn apply(&self, x: &[Rat]) -> Result<QVec> {
        Ok(self.linear.mul_vec(x)?.into_iter().zip(&self.translation).map(|(a, b)| a + b).collect())
    }
}

/// Integer basis of `Z^n ∩ span(directions)`.
fn saturated_span(directions: &[QVec], n: usize) -> Result<Vec<IVec>> {
    if directions.is_empty() {
        return Ok(Vec::new());
    }
    let eqs: Vec<IVec> = nullspace(&QMat::from_rows(directions, n)?).iter().map(|e| primitive_from_rat(e)).collect();
    Ok(integer_kernel(&IMat::from_rows(&eqs, n)?))
}

/// Checks that `map` restricts to a lattice-preserving bijection `p1 → p2`.
pub fn verify_integral_equivalence(p1: &VPolytope, p2: &VPolytope, map: &AffineMap) -> Result<bool> {
    if map.linear.cols() != p1.dim || map.linear.rows() != p2.dim || map.translation.len() != p2.dim {
        return Err(Error::Dimension("map does not fit the polytopes".into()));
    }
    let integral = (0..map.linear.rows()).all(|r| map.linear.row(r).iter().all(Rat::is_integer))
        && map.translation.iter().all(Rat::is_integer);
    if !integral {
        return Err(Error::invalid("map is not integral"));
    }
    let mut image: Vec<QVec> = p1.vertices.iter().map(|v| map.apply(v)).collect::<Result<_>>()?;
    image.sort();
    image.dedup();
    let mut target = p2.vertices.clone();
    target.sort();
    if image.len() != p1.vertices.len() || image != target {
        return Ok(false);
    }

    let dirs = |p: &VPolytope| -> Vec<QVec> {
        p.vertices[1..].iter().map(|v| v.iter().zip(&p.vertices[0]).map(|(a, b)| a - b).collect()).collect()
    };
    let lattice1 = saturated_span(&dirs(p1), p1.dim)?;
    let lattice2 = saturated_span(&dirs(p2), p2.dim)?;
    if lattice1.len() != lattice2.len() {
        return Ok(false);
    }
    if lattice1.is_empty() {
        return Ok(true);
    }
    let linear_int = IMat::from_rows(
        &(0..map.linear.rows())
            .map(|r| map.linear.row(r).iter().map(|x| x.to_integer()).collect())
            .collect::<Vec<IVec>>(),
        map.linear.cols(),
    )?;
    let mut coords = Vec::with_capacity(lattice1.len());
    for b in &lattice1 {
        match lattice_coordinates(&lattice2, &linear_int.mul_vec(b)?)? {
            Some(c) => coords.push(c),
            None => return Ok(false),
        }
    }
    let k = lattice1.len();
    let snf = smith_normal_form(&IMat::from_columns(&coords, k)?);
    let factors = snf.invariant_factors();
    Ok(factors.len() == k && factors.iter().all(One::is_one))
}

/// Basis of the lattice generated by the given integer vectors.
pub fn generated_lattice(vectors: &[IVec], n: usize) -> Result<Vec<IVec>> {
    Ok(image_basis(&IMat::from_columns(vectors, n)?))
}
