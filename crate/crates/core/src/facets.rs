//! Bullet and arrow labelings, facet arrow-labelings and facet components.

use std::collections::VecDeque;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactlin::{to_q, IVec, Int, QVec, Rat};
use crate::fans::Fan;
use crate::quiver::{union_find_classes, StarredQuiver, Vertex};

/// Values on the normal vertices; stars are implicitly 0.
pub type BulletLabeling = QVec;

/// Values on the arrows, in arrow order.
pub type ArrowLabeling = QVec;

fn bullet_value(l: &[Rat], v: Vertex) -> Rat {
    match v {
        Vertex::Normal(i) => l[i].clone(),
        Vertex::Star(_) => Rat::zero(),
    }
}

/// `M(a) = L(head) − L(tail)`.
pub fn bullet_to_arrow(q: &StarredQuiver, l: &[Rat]) -> Result<ArrowLabeling> {
    if l.len() != q.dim() {
        return Err(Error::Dimension(format!("labeling has {} values for {} normal vertices", l.len(), q.dim())));
    }
    Ok(q.arrows().iter().map(|a| bullet_value(l, a.head) - bullet_value(l, a.tail)).collect())
}

/// Integrates `m` along the underlying graph starting from the stars at 0.
/// Returns `None` when some cycle or star-to-star path has a nonzero signed sum.
fn integrate(q: &StarredQuiver, m: &[Rat]) -> Option<BulletLabeling> {
    let nv = q.dim() + q.starred_vertices().len();
    let mut adj: Vec<Vec<(usize, usize, bool)>> = vec![Vec::new(); nv];
    for (k, a) in q.arrows().iter().enumerate() {
        let (t, h) = (q.vertex_index(a.tail), q.vertex_index(a.head));
        adj[t].push((h, k, true));
        adj[h].push((t, k, false));
    }
    let mut value: Vec<Option<Rat>> = vec![None; nv];
    let mut queue = VecDeque::new();
    for s in q.dim()..nv {
        value[s] = Some(Rat::zero());
        queue.push_back(s);
    }
    if queue.is_empty() {
        value[0] = Some(Rat::zero());
        queue.push_back(0);
    }
    while let Some(u) = queue.pop_front() {
        let vu = value[u].clone().expect("visited");
        for &(v, k, forward) in &adj[u] {
            let expected = if forward { &vu + &m[k] } else { &vu - &m[k] };
            match &value[v] {
                None => {
                    value[v] = Some(expected);
                    queue.push_back(v);
                }
                Some(x) if *x != expected => return None,
                Some(_) => {}
            }
        }
    }
    value.into_iter().take(q.dim()).collect()
}

/// Signed sums vanish along every cycle and every path between stars.
pub fn is_zero_sum(q: &StarredQuiver, m: &[Rat]) -> bool {
    m.len() == q.arrows().len() && integrate(q, m).is_some()
}

/// The unique bullet labeling `L` with `M_L = m`.
pub fn arrow_to_bullet(q: &StarredQuiver, m: &[Rat]) -> Result<BulletLabeling> {
    if m.len() != q.arrows().len() {
        return Err(Error::Dimension(format!("labeling has {} values for {} arrows", m.len(), q.arrows().len())));
    }
    if q.starred_vertices().is_empty() {
        return Err(Error::domain("bullet labelings need a starred vertex"));
    }
    integrate(q, m).ok_or_else(|| Error::domain("arrow labeling is not 0-sum"))
}

/// A facet arrow-labeling together with its bullet labeling.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FacetLabeling {
    /// Bullet labeling `L`; the facet is `⟨L, x⟩ ≥ −1`.
    pub bullet: IVec,
    /// Arrow labeling `M_L`, one value per arrow.
    pub arrows: IVec,
    /// Arrows labeled −1, whose points span the facet.
    pub on_facet: Vec<usize>,
}

impl FacetLabeling {
    /// Table row: the constant 1 followed by the coefficients of `L`.
    pub fn table_row(&self) -> IVec {
        std::iter::once(Int::one()).chain(self.bullet.iter().cloned()).collect()
    }
}

/// One facet labeling per facet of `Root(q)`, sorted by bullet labeling.
pub fn facet_labelings(q: &StarredQuiver) -> Result<Vec<FacetLabeling>> {
    if q.starred_vertices().is_empty() {
        return Err(Error::domain("facet labelings need a starred vertex; star a vertex first"));
    }
    q.require_strongly_connected()?;
    let root = q.root_polytope()?;
    if !root.is_full_dimensional() {
        return Err(Error::invariant("root polytope of a strongly connected quiver is not full-dimensional"));
    }
    let mut out = Vec::with_capacity(root.facets().len());
    for f in root.facets() {
        if !f.offset.is_one() {
            return Err(Error::invariant(format!("facet normal {:?} has offset {} instead of 1", f.normal, f.offset)));
        }
        let l = f.normal.clone();
        let m: IVec = (0..q.arrows().len()).map(|a| crate::exactlin::dot(&l, &q.arrow_point(a))).collect();
        let on_facet: Vec<usize> = (0..m.len()).filter(|&a| m[a] == Int::from(-1)).collect();
        debug_assert!(m.iter().all(|x| *x >= Int::from(-1)));
        out.push(FacetLabeling { bullet: l, arrows: m, on_facet });
    }
    out.sort_by(|a, b| a.bullet.cmp(&b.bullet));
    Ok(out)
}

/// Checks the defining properties of a facet labeling directly on the quiver.
pub fn is_facet_labeling(q: &StarredQuiver, m: &[Int]) -> bool {
    let mq: QVec = to_q(m);
    if !is_zero_sum(q, &mq) || m.iter().min() != Some(&Int::from(-1)) {
        return false;
    }
    // maximal -1 set: the -1 points span an affine hyperplane missing the origin
    let pts: Vec<QVec> = (0..m.len()).filter(|&a| m[a] == Int::from(-1)).map(|a| to_q(&q.arrow_point(a))).collect();
    let rows = crate::exactlin::QMat::from_rows(&pts, q.dim()).expect("point length");
    crate::exactlin::rank_q(&rows) == q.dim()
}

/// A maximal connected subquiver all of whose arrows are labeled −1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FacetComponent {
    pub vertices: Vec<Vertex>,
    pub arrows: Vec<usize>,
}

impl FacetComponent {
    pub fn stars(&self) -> Vec<usize> {
        self.vertices
            .iter()
            .filter_map(|v| match v {
                Vertex::Star(s) => Some(*s),
                Vertex::Normal(_) => None,
            })
            .collect()
    }
}

/// Components of the −1 subquiver, isolated vertices included; stars stay distinct.
pub fn facet_components(q: &StarredQuiver, m: &FacetLabeling) -> Vec<FacetComponent> {
    let verts = q.vertices();
    let pairs = m.on_facet.iter().map(|&a| {
        let arrow = q.arrows()[a];
        (q.vertex_index(arrow.tail), q.vertex_index(arrow.head))
    });
    let class = union_find_classes(verts.len(), pairs);
    let mut comps: Vec<FacetComponent> = Vec::new();
    let mut slot = vec![usize::MAX; verts.len()];
    for (i, v) in verts.iter().enumerate() {
        let r = class[i];
        if slot[r] == usize::MAX {
            slot[r] = comps.len();
            comps.push(FacetComponent { vertices: Vec::new(), arrows: Vec::new() });
        }
        comps[slot[r]].vertices.push(*v);
    }
    for &a in &m.on_facet {
        let t = q.vertex_index(q.arrows()[a].tail);
        comps[slot[class[t]]].arrows.push(a);
    }
    comps
}

/// Face fan of `Root(q)`: one maximal cone per facet, spanned by the points on it.
pub fn face_fan(q: &StarredQuiver) -> Result<Fan> {
    let labelings = facet_labelings(q)?;
    let cones: Vec<Vec<IVec>> =
        labelings.iter().map(|f| f.on_facet.iter().map(|&a| q.arrow_point(a)).collect()).collect();
    Fan::from_cones(q.dim(), &cones)
}

/// Facet labelings by exhaustive search over bullet labelings in `[-bound, bound]^n`.
///
/// Exponential; meant as an independent check for small quivers.
pub fn facet_labelings_by_search(q: &StarredQuiver, bound: i64) -> Vec<IVec> {
    let n = q.dim();
    let mut found = Vec::new();
    let mut l = vec![-bound; n];
    loop {
        let li: IVec = l.iter().map(|&x| Int::from(x)).collect();
        let lq = to_q(&li);
        let m = bullet_to_arrow(q, &lq).expect("dimension");
        let mi: IVec = m.iter().map(|x| x.to_integer()).collect();
        if is_facet_labeling(q, &mi) {
            found.push(li);
        }
        let mut k = 0;
        loop {
            if k == n {
                found.sort();
                return found;
            }
            l[k] += 1;
            if l[k] <= bound {
                break;
            }
            l[k] = -bound;
            k += 1;
        }
    }
}
