//! Plane quivers given by rotation systems, their planar duals, and flow polytopes.

use std::collections::BTreeSet;

use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::exactlin::{integer_kernel, solve_rational, to_integral, to_q, IMat, IVec, Int, QMat, QVec, Rat};
use crate::polytope::{
    is_reflexive, verify_integral_equivalence, AffineMap, HPolytope, Inequality, Polytope, ReflexiveCertificate,
    VPolytope,
};
use crate::quiver::{Arrow, Quiver, StarredQuiver, Vertex};

/// An acyclic connected quiver with a combinatorial plane embedding.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlaneQuiver {
    quiver: Quiver,
    /// Arrows at each vertex in counterclockwise order.
    rotation: Vec<Vec<usize>>,
    outer_face: Vec<usize>,
}

/// A face as the cyclic sequence of darts bounding it (face on the left).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    /// Dart `2a` runs along arrow `a`, dart `2a + 1` against it.
    pub darts: Vec<usize>,
}

impl Face {
    pub fn arrows(&self) -> BTreeSet<usize> {
        self.darts.iter().map(|d| d / 2).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Faces {
    pub bounded: Vec<Face>,
    pub outer: Face,
    /// Face index of every dart; the outer face has index `bounded.len()`.
    pub face_of_dart: Vec<usize>,
}

impl PlaneQuiver {
    /// `rotation[v]` lists the arrows at `v` counterclockwise; `outer_face` lists the arrows bounding the unbounded region.
    pub fn new(quiver: Quiver, rotation: Vec<Vec<usize>>, outer_face: Vec<usize>) -> Result<Self> {
        if !quiver.is_acyclic() {
            return Err(Error::domain("plane quiver has an oriented cycle"));
        }
        if quiver.vertices.is_empty() || !quiver.is_connected() {
            return Err(Error::domain("plane quiver is not connected"));
        }
        if rotation.len() != quiver.vertices.len() {
            return Err(Error::invalid("rotation system must list every vertex"));
        }
        for (v, rot) in rotation.iter().enumerate() {
            let mut listed = rot.clone();
            listed.sort_unstable();
            let mut incident: Vec<usize> =
                (0..quiver.arrows.len()).filter(|&a| quiver.arrows[a].0 == v || quiver.arrows[a].1 == v).collect();
            incident.sort_unstable();
            if listed != incident {
                return Err(Error::invalid(format!(
                    "rotation at {} must list each incident arrow exactly once",
                    quiver.vertices[v]
                )));
            }
        }
        if outer_face.iter().any(|&a| a >= quiver.arrows.len()) {
            return Err(Error::invalid("outer face names an unknown arrow"));
        }
        let pq = PlaneQuiver { quiver, rotation, outer_face };
        pq.faces()?;
        Ok(pq)
    }

    /// Straight-line embedding from integer coordinates; the outer face is found from signed areas.
    pub fn from_coordinates(quiver: Quiver, coords: &[(i64, i64)]) -> Result<Self> {
        if coords.len() != quiver.vertices.len() {
            return Err(Error::invalid("one coordinate per vertex"));
        }
        let direction = |v: usize, a: usize| {
            let (t, h) = quiver.arrows[a];
            let w = if t == v { h } else { t };
            (coords[w].0 - coords[v].0, coords[w].1 - coords[v].1)
        };
        let rotation: Vec<Vec<usize>> = (0..quiver.vertices.len())
            .map(|v| {
                let mut at: Vec<usize> =
                    (0..quiver.arrows.len()).filter(|&a| quiver.arrows[a].0 == v || quiver.arrows[a].1 == v).collect();
                at.sort_by(|&a, &b| angle_cmp(direction(v, a), direction(v, b)));
                at
            })
            .collect();
        let mut pq = PlaneQuiver { quiver, rotation, outer_face: Vec::new() };
        let traced = pq.trace_faces();
        // the outer boundary is the only face traced clockwise
        let area = |f: &Vec<usize>| -> i64 {
            f.iter()
                .map(|&d| {
                    let (s, t) = pq.dart_ends(d);
                    coords[s].0 * coords[t].1 - coords[t].0 * coords[s].1
                })
                .sum()
        };
        let outer = traced
            .iter()
            .find(|f| area(f) < 0)
            .or_else(|| traced.iter().find(|f| area(f) == 0))
            .ok_or_else(|| Error::invalid("no outer face found"))?;
        pq.outer_face = outer.iter().map(|d| d / 2).collect::<BTreeSet<_>>().into_iter().collect();
        let checked = PlaneQuiver::new(pq.quiver, pq.rotation, pq.outer_face)?;
        Ok(checked)
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn rotation(&self) -> &[Vec<usize>] {
        &self.rotation
    }

    pub fn outer_face(&self) -> &[usize] {
        &self.outer_face
    }

    fn dart_ends(&self, d: usize) -> (usize, usize) {
        let (t, h) = self.quiver.arrows[d / 2];
        if d.is_multiple_of(2) {
            (t, h)
        } else {
            (h, t)
        }
    }

    /// The dart following `d` around its left face.
    fn next_dart(&self, d: usize) -> usize {
        let (_, v) = self.dart_ends(d);
        let rot = &self.rotation[v];
        let pos = rot.iter().position(|&a| a == d / 2).expect("rotation lists every arrow");
        let prev = rot[(pos + rot.len() - 1) % rot.len()];
        let (t, _) = self.quiver.arrows[prev];
        if t == v {
            2 * prev
        } else {
            2 * prev + 1
        }
    }

    fn trace_faces(&self) -> Vec<Vec<usize>> {
        let nd = 2 * self.quiver.arrows.len();
        let mut seen = vec![false; nd];
        let mut faces = Vec::new();
        for start in 0..nd {
            if seen[start] {
                continue;
            }
            let mut face = Vec::new();
            let mut d = start;
            while !seen[d] {
                seen[d] = true;
                face.push(d);
                d = self.next_dart(d);
            }
            faces.push(face);
        }
        faces
    }

    /// Bounded faces and the outer face; errors unless the rotation system is planar.
    pub fn faces(&self) -> Result<Faces> {
        let traced = self.trace_faces();
        let (v, e, f) = (self.quiver.vertices.len(), self.quiver.arrows.len(), traced.len());
        if e == 0 {
            let outer = Face { darts: Vec::new() };
            return Ok(Faces { bounded: Vec::new(), outer, face_of_dart: Vec::new() });
        }
        if v + f != e + 2 {
            return Err(Error::domain(format!(
                "rotation system is not planar: V - E + F = {} - {} + {} != 2",
                v, e, f
            )));
        }
        let wanted: BTreeSet<usize> = self.outer_face.iter().copied().collect();
        let candidates: Vec<usize> =
            (0..traced.len()).filter(|&i| traced[i].iter().map(|d| d / 2).collect::<BTreeSet<_>>() == wanted).collect();
        let outer_idx = match candidates.as_slice() {
            [] => return Err(Error::invalid("outer face does not match any face of the embedding")),
            [one] => *one,
            several => {
                // same arrow set: prefer the face whose cyclic arrow order matches the listing
                let listed: Vec<usize> = self.outer_face.clone();
                *several
                    .iter()
                    .find(|&&i| cyclic_match(&traced[i].iter().map(|d| d / 2).collect::<Vec<_>>(), &listed))
                    .unwrap_or(&several[0])
            }
        };
        let nb = traced.len() - 1;
        let mut bounded = Vec::with_capacity(nb);
        let mut outer = Face { darts: Vec::new() };
        let mut face_of_dart = vec![0; 2 * e];
        for (i, darts) in traced.into_iter().enumerate() {
            let slot = if i == outer_idx { nb } else { bounded.len() };
            for &d in &darts {
                face_of_dart[d] = slot;
            }
            if i == outer_idx {
                outer = Face { darts };
            } else {
                bounded.push(Face { darts });
            }
        }
        Ok(Faces { bounded, outer, face_of_dart })
    }
}

fn cyclic_match(cycle: &[usize], listed: &[usize]) -> bool {
    cycle.len() == listed.len()
        && (0..cycle.len()).any(|s| (0..cycle.len()).all(|k| cycle[(s + k) % cycle.len()] == listed[k]))
}

/// Counterclockwise angular order of nonzero integer directions, starting at the positive x-axis.
fn angle_cmp(a: (i64, i64), b: (i64, i64)) -> std::cmp::Ordering {
    let half = |p: (i64, i64)| if p.1 > 0 || (p.1 == 0 && p.0 > 0) { 0 } else { 1 };
    half(a).cmp(&half(b)).then_with(|| 0.cmp(&(a.0 * b.1 - a.1 * b.0)))
}

/// The planar dual starred quiver with the primal arrow behind each dual arrow.
#[derive(Clone, Debug)]
pub struct DualQuiver {
    pub quiver: StarredQuiver,
    /// Dual arrow crossing each primal arrow; `None` for bridges. Parallel dual
    /// arrows are merged, so several primal arrows can share one dual arrow.
    pub dual_arrow: Vec<Option<usize>>,
    /// Primal arrows with the same face on both sides; they get no dual arrow.
    pub bridges: Vec<usize>,
}

/// One normal vertex per bounded face, a star for the outer face, arrows crossing left to right.
pub fn dual_quiver(pq: &PlaneQuiver) -> Result<DualQuiver> {
    let faces = pq.faces()?;
    let nb = faces.bounded.len();
    if nb == 0 {
        return Err(Error::domain("embedding has no bounded faces, so the dual has no normal vertices"));
    }
    let vertex = |f: usize| if f == nb { Vertex::Star(0) } else { Vertex::Normal(f) };
    let mut arrows = Vec::new();
    let mut bridges = Vec::new();
    let mut crossing = Vec::with_capacity(pq.quiver.arrows.len());
    for a in 0..pq.quiver.arrows.len() {
        let (left, right) = (faces.face_of_dart[2 * a], faces.face_of_dart[2 * a + 1]);
        if left == right {
            bridges.push(a);
            crossing.push(None);
            continue;
        }
        let arrow = Arrow { tail: vertex(left), head: vertex(right) };
        crossing.push(Some(arrow));
        arrows.push(arrow);
    }
    let normal = (1..=nb).map(|i| format!("f{i}")).collect();
    let quiver = StarredQuiver::from_parts(normal, vec!["outer".into()], arrows, Vec::new())?;
    let dual_arrow = crossing
        .into_iter()
        .map(|c| c.map(|arrow| quiver.arrows().iter().position(|b| *b == arrow).expect("kept")))
        .collect();
    Ok(DualQuiver { quiver, dual_arrow, bridges })
}

/// Signed incidence matrix: +1 at the head, −1 at the tail.
fn incidence(q: &Quiver) -> IMat {
    let mut m = IMat::zeros(q.vertices.len(), q.arrows.len());
    for (a, &(t, h)) in q.arrows.iter().enumerate() {
        m.set(h, a, Int::one());
        m.set(t, a, -Int::one());
    }
    m
}

/// `Fl_Q` in flow-lattice coordinates `z`, where `r = Σ z_k basis_k`.
#[derive(Clone, Debug)]
pub struct FlowPolytope {
    /// Integer basis of the conservation lattice, each vector indexed by arrows.
    pub basis: Vec<IVec>,
    /// `{z : r_a(z) ≥ −1}`, one row per arrow carrying nonzero flow.
    pub polytope: HPolytope,
    /// The same body in arrow coordinates with the conservation relations as equations.
    pub in_arrow_coordinates: HPolytope,
}

impl FlowPolytope {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Row `a` of the basis matrix: the linear form giving `r_a` in `z`-coordinates.
    pub fn arrow_form(&self, a: usize) -> IVec {
        self.basis.iter().map(|b| b[a].clone()).collect()
    }

    pub fn to_arrow_coordinates(&self, z: &[Rat]) -> QVec {
        let m = self.basis.first().map_or(0, Vec::len);
        (0..m).map(|a| self.basis.iter().zip(z).map(|(b, x)| Rat::from_integer(b[a].clone()) * x).sum()).collect()
    }
}

/// Flow polytope of an acyclic connected quiver.
pub fn flow_polytope(q: &Quiver) -> Result<FlowPolytope> {
    if !q.is_acyclic() {
        return Err(Error::domain("flow polytope needs an acyclic quiver"));
    }
    if q.vertices.is_empty() || !q.is_connected() {
        return Err(Error::domain("flow polytope needs a connected quiver"));
    }
    let b = incidence(q);
    let basis = integer_kernel(&b);
    let d = basis.len();
    let ne = q.arrows.len();
    let mut ineqs = Vec::new();
    for a in 0..ne {
        let form: IVec = basis.iter().map(|k| k[a].clone()).collect();
        if form.iter().all(Zero::is_zero) {
            continue;
        }
        ineqs.push(Inequality::new(form, Rat::one()));
    }
    let polytope = HPolytope::new(d, ineqs)?;
    let arrow_ineqs = (0..ne)
        .map(|a| {
            let mut n = vec![Int::zero(); ne];
            n[a] = Int::one();
            Inequality::new(n, Rat::one())
        })
        .collect();
    let equations = (0..b.rows()).map(|v| Inequality::new(b.row(v).to_vec(), Rat::zero())).collect();
    let in_arrow_coordinates = HPolytope::with_equations(ne, arrow_ineqs, equations)?;
    Ok(FlowPolytope { basis, polytope, in_arrow_coordinates })
}

/// The canonical-weight flow polytope `{R ≥ 0, θ(q) + Σ_in R = Σ_out R}` shifted by `−1`.
pub fn canonical_weight_flow_polytope(q: &Quiver) -> Result<HPolytope> {
    let ne = q.arrows.len();
    let b = incidence(q);
    let ineqs: Vec<Inequality> = (0..ne)
        .map(|a| {
            let mut n = vec![Int::zero(); ne];
            n[a] = Int::one();
            Inequality::new(n, Rat::zero())
        })
        .collect();
    // θ(q) = outdeg − indeg = −Σ_a B[q][a]
    let equations = (0..b.rows())
        .map(|v| {
            let theta: Int = -b.row(v).iter().sum::<Int>();
            Inequality::new(b.row(v).to_vec(), Rat::from_integer(theta))
        })
        .collect();
    let delta = HPolytope::with_equations(ne, ineqs, equations)?;
    Ok(delta.translate_back(&vec![Rat::one(); ne]))
}

/// The conservation relation at each vertex, as `in = out` text.
pub fn flow_relations(q: &Quiver) -> Vec<String> {
    let name = |a: usize| format!("r_{}", a + 1);
    (0..q.vertices.len())
        .map(|v| {
            let incoming: Vec<String> = (0..q.arrows.len()).filter(|&a| q.arrows[a].1 == v).map(name).collect();
            let outgoing: Vec<String> = (0..q.arrows.len()).filter(|&a| q.arrows[a].0 == v).map(name).collect();
            match (incoming.is_empty(), outgoing.is_empty()) {
                (true, _) => format!("{} = 0", outgoing.join(" + ")),
                (_, true) => format!("{} = 0", incoming.join(" + ")),
                _ => format!("{} = {}", incoming.join(" + "), outgoing.join(" + ")),
            }
        })
        .collect()
}

/// Outcome of the flow-polytope duality check.
#[derive(Clone, Debug)]
pub struct FlowDuality {
    pub holds: bool,
    pub dual: DualQuiver,
    pub flow: FlowPolytope,
    /// Linear map from the dual's root-polytope space to flow coordinates.
    pub map: QMat,
    /// Vertices of the flow polytope in flow coordinates.
    pub flow_vertices: Vec<QVec>,
    pub flow_reflexive: bool,
}

/// Checks that `r_ā = r_a` identifies `Root(Q^∨)` with the polar dual of `Fl_Q`.
pub fn verify_flow_duality(pq: &PlaneQuiver) -> Result<FlowDuality> {
    let dual = dual_quiver(pq)?;
    let flow = flow_polytope(pq.quiver())?;
    let n = dual.quiver.dim();
    let d = flow.dim();
    if n != d {
        return Err(Error::invariant(format!("dual has {n} normal vertices but the flow space has dimension {d}")));
    }
    let flow_vertices = flow.polytope.vertices()?;
    if flow_vertices.is_empty() {
        return Err(Error::invariant("flow polytope is empty"));
    }

    // linear map Ψ with Ψ(u_ā) = (form of r_a), one equation per crossed primal arrow
    let crossed: Vec<(usize, usize)> =
        dual.dual_arrow.iter().enumerate().filter_map(|(a, k)| k.map(|k| (a, k))).collect();
    let points: Vec<QVec> = crossed.iter().map(|&(_, k)| to_q(&dual.quiver.arrow_point(k))).collect();
    let p_mat = QMat::from_rows(&points, n)?;
    let mut map = QMat::zeros(d, n);
    for row in 0..d {
        let rhs: QVec = crossed.iter().map(|&(a, _)| Rat::from_integer(flow.basis[row][a].clone())).collect();
        match solve_rational(&p_mat, &rhs)? {
            Some(x) => x.into_iter().enumerate().for_each(|(c, v)| map.set(row, c, v)),
            None => return Ok(FlowDuality { holds: false, dual, flow, map, flow_vertices, flow_reflexive: false }),
        }
    }
    let integral = (0..d).all(|r| map.row(r).iter().all(Rat::is_integer));
    let root = dual.quiver.root_vpolytope()?;
    let forms: Vec<QVec> = crossed.iter().map(|&(a, _)| to_q(&flow.arrow_form(a))).collect();
    let fl = Polytope::from_h(&flow.polytope)?;
    let polar_dual = crate::polytope::polar_dual(&fl.v)?;
    // the polar dual is the hull of the arrow forms when every vertex is one of them
    let forms_hull = VPolytope::new(&forms)?;
    let equivalent = integral
        && forms_hull == polar_dual
        && verify_integral_equivalence(&root, &polar_dual, &AffineMap::linear(map.clone()))?;
    let flow_reflexive = flow_vertices.iter().all(|v| to_integral(v).is_some())
        && matches!(is_reflexive(&fl.v)?, ReflexiveCertificate::Reflexive(_));
    Ok(FlowDuality { holds: equivalent, dual, flow, map, flow_vertices, flow_reflexive })
}

/// Random connected acyclic plane quiver with a straight-line embedding on a small grid.
///
/// Returns `None` when the sampled graph has no bounded face.
pub fn random_plane_quiver<R: Rng>(rng: &mut R, vertices: usize, max_arrows: usize) -> Option<PlaneQuiver> {
    let grid = 4 * vertices as i64 + 4;
    let mut coords: Vec<(i64, i64)> = Vec::new();
    while coords.len() < vertices {
        let p = (rng.gen_range(0..grid), rng.gen_range(0..grid));
        if coords.contains(&p) {
            continue;
        }
        let collinear = (0..coords.len()).any(|i| {
            (i + 1..coords.len()).any(|j| {
                let (a, b) = (coords[i], coords[j]);
                (b.0 - a.0) * (p.1 - a.1) - (b.1 - a.1) * (p.0 - a.0) == 0
            })
        });
        if !collinear {
            coords.push(p);
        }
    }
    let mut pairs: Vec<(usize, usize)> = (0..vertices).flat_map(|i| (i + 1..vertices).map(move |j| (i, j))).collect();
    pairs.shuffle(rng);
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for (i, j) in pairs {
        if edges.len() == max_arrows {
            break;
        }
        if edges.iter().all(|&(a, b)| !segments_cross(coords[i], coords[j], coords[a], coords[b])) {
            edges.push((i, j));
        }
    }
    let mut order: Vec<usize> = (0..vertices).collect();
    order.shuffle(rng);
    let mut position = vec![0; vertices];
    for (k, &v) in order.iter().enumerate() {
        position[v] = k;
    }
    let arrows: Vec<(usize, usize)> =
        edges.into_iter().map(|(i, j)| if position[i] < position[j] { (i, j) } else { (j, i) }).collect();
    let quiver = Quiver { vertices: (0..vertices).map(|i| format!("p{i}")).collect(), arrows };
    if !quiver.is_connected() || quiver.arrows.len() < quiver.vertices.len() {
        return None;
    }
    PlaneQuiver::from_coordinates(quiver, &coords).ok()
}

/// Proper crossing of two segments; shared endpoints do not count.
fn segments_cross(p1: (i64, i64), p2: (i64, i64), q1: (i64, i64), q2: (i64, i64)) -> bool {
    if p1 == q1 || p1 == q2 || p2 == q1 || p2 == q2 {
        return false;
    }
    let orient =
        |a: (i64, i64), b: (i64, i64), c: (i64, i64)| ((b.0 - a.0) * (c.1 - a.1) - (b.1 - a.1) * (c.0 - a.0)).signum();
    let (d1, d2) = (orient(q1, q2, p1), orient(q1, q2, p2));
    let (d3, d4) = (orient(p1, p2, q1), orient(p1, p2, q2));
    d1 * d2 < 0 && d3 * d4 < 0
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn diamond() -> PlaneQuiver {
        let q = Quiver::new(&["u", "v", "w", "z"], &[("u", "v"), ("u", "w"), ("v", "z"), ("w", "z")]).unwrap();
        PlaneQuiver::from_coordinates(q, &[(0, 0), (1, 1), (1, -1), (2, 0)]).unwrap()
    }

    #[test]
    fn diamond_duality() {
        let pq = diamond();
        let faces = pq.faces().unwrap();
        assert_eq!(faces.bounded.len(), 1);
        let r = verify_flow_duality(&pq).unwrap();
        assert!(r.holds);
        assert!(r.flow_reflexive);
        assert_eq!(r.dual.quiver.dim(), 1);
        assert_eq!(r.dual.quiver.root_points().len(), 2);
    }

    #[test]
    fn single_arrow_has_no_dual() {
        let q = Quiver::new(&["u", "v"], &[("u", "v")]).unwrap();
        let pq = PlaneQuiver::from_coordinates(q, &[(0, 0), (1, 0)]).unwrap();
        assert_eq!(pq.faces().unwrap().bounded.len(), 0);
        assert!(dual_quiver(&pq).is_err());
    }

    #[test]
    fn path_flow_is_a_point() {
        let q = Quiver::new(&["u", "v", "w"], &[("u", "v"), ("v", "w")]).unwrap();
        let fl = flow_polytope(&q).unwrap();
        assert_eq!(fl.dim(), 0);
    }

    #[test]
    fn non_planar_rotation_rejected() {
        // K4 with a rotation system of genus 1
        let q = Quiver::new(
            &["a", "b", "c", "d"],
            &[("a", "b"), ("a", "c"), ("a", "d"), ("b", "c"), ("b", "d"), ("c", "d")],
        )
        .unwrap();
        let rotation = vec![vec![0, 1, 2], vec![0, 3, 4], vec![1, 3, 5], vec![2, 4, 5]];
        assert!(PlaneQuiver::new(q, rotation, vec![0, 1, 3]).is_err());
    }

    #[test]
    fn random_embeddings_are_planar() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut made = 0;
        for _ in 0..40 {
            if let Some(pq) = random_plane_quiver(&mut rng, 5, 8) {
                pq.faces().unwrap();
                made += 1;
            }
        }
        assert!(made > 10);
    }

    #[test]
    fn angular_order() {
        let mut dirs = vec![(0, -1), (1, 0), (-1, 0), (0, 1), (1, 1)];
        dirs.sort_by(|&a, &b| angle_cmp(a, b));
        assert_eq!(dirs, vec![(1, 0), (1, 1), (0, 1), (-1, 0), (0, -1)]);
    }
}
