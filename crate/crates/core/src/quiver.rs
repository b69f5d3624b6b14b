//! Starred quivers and the arrow vectors that span their root polytopes.

use std::collections::{BTreeSet, HashMap, VecDeque};

use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::exactlin::{IVec, Int};
use crate::polytope::{self, Polytope, VPolytope};

/// A vertex of a starred quiver: an index into the normal or starred vertex list.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Vertex {
    Normal(usize),
    Star(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Arrow {
    pub tail: Vertex,
    pub head: Vertex,
}

/// A quiver whose vertices are split into normal and starred ones.
///
/// Construction applies the cleanup rules: an arrow between two stars
/// identifies them, duplicate arrows are dropped. Every rewrite is recorded
/// in [`StarredQuiver::log`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StarredQuiver {
    normal: Vec<String>,
    stars: Vec<String>,
    arrows: Vec<Arrow>,
    log: Vec<String>,
}

/// An arrow together with its lattice point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArrowPoint {
    pub arrow: usize,
    pub point: IVec,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, x: usize) -> usize {
        let p = self.0[x];
        if p == x {
            return x;
        }
        let r = self.find(p);
        self.0[x] = r;
        r
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        // keep the smaller index as representative so the first-declared name survives
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.0[hi] = lo;
        true
    }
}

pub(crate) fn union_find_classes(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Vec<usize> {
    let mut uf = UnionFind::new(n);
    for (a, b) in pairs {
        uf.union(a, b);
    }
    (0..n).map(|i| uf.find(i)).collect()
}

impl StarredQuiver {
    /// Builds a starred quiver from vertex names and `(tail, head)` name pairs.
    pub fn new<S: AsRef<str>>(normal: &[S], stars: &[S], arrows: &[(S, S)]) -> Result<Self> {
        let normal: Vec<String> = normal.iter().map(|s| s.as_ref().to_string()).collect();
        let stars: Vec<String> = stars.iter().map(|s| s.as_ref().to_string()).collect();
        let mut index: HashMap<&str, Vertex> = HashMap::new();
        for (i, name) in normal.iter().enumerate() {
            if index.insert(name, Vertex::Normal(i)).is_some() {
                return Err(Error::invalid(format!("vertex {name:?} declared twice")));
            }
        }
        for (i, name) in stars.iter().enumerate() {
            if index.insert(name, Vertex::Star(i)).is_some() {
                return Err(Error::invalid(format!("vertex {name:?} declared twice")));
            }
        }
        let mut raw = Vec::with_capacity(arrows.len());
        for (t, h) in arrows {
            let lookup = |s: &str| index.get(s).copied().ok_or_else(|| Error::invalid(format!("unknown vertex {s:?}")));
            raw.push(Arrow { tail: lookup(t.as_ref())?, head: lookup(h.as_ref())? });
        }
        Self::from_parts(normal, stars, raw, Vec::new())
    }

    /// Builds from indexed arrows, applying the cleanup rules.
    pub fn from_parts(
        normal: Vec<String>,
        stars: Vec<String>,
        arrows: Vec<Arrow>,
        mut log: Vec<String>,
    ) -> Result<Self> {
        for a in &arrows {
            let check = |v: Vertex| match v {
                Vertex::Normal(i) if i < normal.len() => Ok(()),
                Vertex::Star(i) if i < stars.len() => Ok(()),
                _ => Err(Error::invalid("arrow endpoint out of range")),
            };
            check(a.tail)?;
            check(a.head)?;
            if a.tail == a.head {
                return Err(Error::invalid("loops are not allowed"));
            }
        }

        // an arrow between two stars identifies its endpoints
        let star_pairs: Vec<(usize, usize)> = arrows
            .iter()
            .filter_map(|a| match (a.tail, a.head) {
                (Vertex::Star(s), Vertex::Star(t)) => Some((s, t)),
                _ => None,
            })
            .collect();
        let class = union_find_classes(stars.len(), star_pairs.iter().copied());
        let reps: Vec<usize> = (0..stars.len()).filter(|&s| class[s] == s).collect();
        let new_index: HashMap<usize, usize> = reps.iter().enumerate().map(|(k, &s)| (s, k)).collect();
        for s in 0..stars.len() {
            if class[s] != s {
                log.push(format!("identified star {} with {} (arrow between stars)", stars[s], stars[class[s]]));
            }
        }
        let remap = |v: Vertex| match v {
            Vertex::Star(s) => Vertex::Star(new_index[&class[s]]),
            n => n,
        };
        let new_stars: Vec<String> = reps.iter().map(|&s| stars[s].clone()).collect();

        let mut seen = BTreeSet::new();
        let mut kept = Vec::with_capacity(arrows.len());
        for a in arrows {
            let b = Arrow { tail: remap(a.tail), head: remap(a.head) };
            if matches!((b.tail, b.head), (Vertex::Star(_), Vertex::Star(_))) {
                continue;
            }
            if !seen.insert(b) {
                log.push(format!(
                    "removed duplicate arrow {} -> {}",
                    name_of(&normal, &new_stars, b.tail),
                    name_of(&normal, &new_stars, b.head)
                ));
                continue;
            }
            kept.push(b);
        }

        if normal.is_empty() {
            return Err(Error::domain("quiver has no normal vertices"));
        }
        let q = StarredQuiver { normal, stars: new_stars, arrows: kept, log };
        if !q.is_connected() {
            return Err(Error::domain("underlying graph is not connected"));
        }
        Ok(q)
    }

    pub fn normal_vertices(&self) -> &[String] {
        &self.normal
    }

    pub fn starred_vertices(&self) -> &[String] {
        &self.stars
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    /// Normalization log: identifications and removed duplicates.
    pub fn log(&self) -> &[String] {
        &self.log
    }

    /// Number of normal vertices, the ambient dimension of the root polytope.
    pub fn dim(&self) -> usize {
        self.normal.len()
    }

    pub fn vertex_name(&self, v: Vertex) -> &str {
        name_of(&self.normal, &self.stars, v)
    }

    pub fn arrow_label(&self, a: usize) -> String {
        let arrow = self.arrows[a];
        format!("{}->{}", self.vertex_name(arrow.tail), self.vertex_name(arrow.head))
    }

    pub fn vertices(&self) -> Vec<Vertex> {
        (0..self.normal.len()).map(Vertex::Normal).chain((0..self.stars.len()).map(Vertex::Star)).collect()
    }

    /// Flat index: normal vertices first, then stars.
    pub fn vertex_index(&self, v: Vertex) -> usize {
        match v {
            Vertex::Normal(i) => i,
            Vertex::Star(s) => self.normal.len() + s,
        }
    }

    fn is_connected(&self) -> bool {
        let n = self.normal.len() + self.stars.len();
        let mut adj = vec![Vec::new(); n];
        for a in &self.arrows {
            let (t, h) = (self.vertex_index(a.tail), self.vertex_index(a.head));
            adj[t].push(h);
            adj[h].push(t);
        }
        reachable(&adj, 0).iter().all(|&r| r)
    }

    /// Lattice point of an arrow: `e_j − e_i`, `e_j` or `−e_i`.
    pub fn arrow_point(&self, a: usize) -> IVec {
        let mut p = vec![Int::zero(); self.dim()];
        let arrow = self.arrows[a];
        if let Vertex::Normal(j) = arrow.head {
            p[j] += Int::one();
        }
        if let Vertex::Normal(i) = arrow.tail {
            p[i] -= Int::one();
        }
        p
    }

    /// One point per arrow.
    pub fn root_vertices(&self) -> Vec<ArrowPoint> {
        (0..self.arrows.len()).map(|a| ArrowPoint { arrow: a, point: self.arrow_point(a) }).collect()
    }

    /// The distinct arrow points, sorted.
    pub fn root_points(&self) -> Vec<IVec> {
        let mut pts: Vec<IVec> = (0..self.arrows.len()).map(|a| self.arrow_point(a)).collect();
        pts.sort();
        pts.dedup();
        pts
    }

    /// `Root(Q)` with both descriptions.
    pub fn root_polytope(&self) -> Result<Polytope> {
        let pts: Vec<_> = self.root_points().iter().map(|p| crate::exactlin::to_q(p)).collect();
        polytope::hull(&pts)
    }

    pub fn root_vpolytope(&self) -> Result<VPolytope> {
        VPolytope::from_integer_points(&self.root_points())
    }

    /// Identify all stars into one; also returns where each old arrow went.
    pub fn identify_stars_with_map(&self) -> Result<(StarredQuiver, Vec<usize>)> {
        if self.stars.is_empty() {
            return Err(Error::domain("quiver has no starred vertices"));
        }
        let mut log = self.log.clone();
        if self.stars.len() > 1 {
            log.push(format!("identified stars {} into {}", self.stars.join(", "), self.stars[0]));
        }
        let merge = |v: Vertex| match v {
            Vertex::Star(_) => Vertex::Star(0),
            n => n,
        };
        let mut map = Vec::with_capacity(self.arrows.len());
        let mut kept: Vec<Arrow> = Vec::new();
        let mut position: HashMap<Arrow, usize> = HashMap::new();
        for a in &self.arrows {
            let b = Arrow { tail: merge(a.tail), head: merge(a.head) };
            match position.get(&b) {
                Some(&k) => {
                    log.push(format!(
                        "removed duplicate arrow {} -> {}",
                        self.vertex_name(b.tail),
                        self.vertex_name(b.head)
                    ));
                    map.push(k);
                }
                None => {
                    position.insert(b, kept.len());
                    map.push(kept.len());
                    kept.push(b);
                }
            }
        }
        let q = StarredQuiver { normal: self.normal.clone(), stars: vec![self.stars[0].clone()], arrows: kept, log };
        Ok((q, map))
    }

    pub fn identify_stars(&self) -> Result<StarredQuiver> {
        Ok(self.identify_stars_with_map()?.0)
    }

    /// Digraph on normal vertices plus (at most) one merged star.
    fn merged_adjacency(&self) -> (Vec<Vec<usize>>, Vec<Vec<usize>>) {
        let n = self.normal.len() + usize::from(!self.stars.is_empty());
        let idx = |v: Vertex| match v {
            Vertex::Normal(i) => i,
            Vertex::Star(_) => self.normal.len(),
        };
        let mut fwd = vec![Vec::new(); n];
        let mut bwd = vec![Vec::new(); n];
        for a in &self.arrows {
            fwd[idx(a.tail)].push(idx(a.head));
            bwd[idx(a.head)].push(idx(a.tail));
        }
        (fwd, bwd)
    }

    /// Strong connectivity after identifying all stars.
    pub fn is_strongly_connected(&self) -> bool {
        self.strong_connectivity_witness().is_none()
    }

    /// A pair `(u, v)` with no oriented path from `u` to `v`, if one exists.
    pub fn strong_connectivity_witness(&self) -> Option<(String, String)> {
        let (fwd, bwd) = self.merged_adjacency();
        let name = |i: usize| {
            if i < self.normal.len() {
                self.normal[i].clone()
            } else {
                self.stars[0].clone()
            }
        };
        let from0 = reachable(&fwd, 0);
        if let Some(v) = from0.iter().position(|&r| !r) {
            return Some((name(0), name(v)));
        }
        let to0 = reachable(&bwd, 0);
        to0.iter().position(|&r| !r).map(|u| (name(u), name(0)))
    }

    pub(crate) fn require_strongly_connected(&self) -> Result<()> {
        match self.strong_connectivity_witness() {
            None => Ok(()),
            Some((u, v)) => Err(Error::domain(format!("quiver is not strongly connected: no path {u} -> {v}"))),
        }
    }

    /// Complete bidirected quiver on `n` normal vertices and one star.
    pub fn complete_bidirected(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("complete bidirected quiver needs n >= 1"));
        }
        let normal: Vec<String> = (1..=n).map(|i| format!("v{i}")).collect();
        let mut arrows = Vec::new();
        for i in 0..n {
            arrows.push(Arrow { tail: Vertex::Star(0), head: Vertex::Normal(i) });
            arrows.push(Arrow { tail: Vertex::Normal(i), head: Vertex::Star(0) });
            for j in 0..n {
                if i != j {
                    arrows.push(Arrow { tail: Vertex::Normal(i), head: Vertex::Normal(j) });
                }
            }
        }
        Self::from_parts(normal, vec!["*".into()], arrows, Vec::new())
    }

    /// A random strongly connected starred quiver on `n` normal vertices and `stars` stars.
    ///
    /// A cycle through the first star and every normal vertex guarantees strong
    /// connectivity; each further star gets one arrow, and `extra` random arrows are added.
    pub fn random<R: Rng>(rng: &mut R, n: usize, stars: usize, extra: usize) -> Result<Self> {
        if n == 0 || stars == 0 {
            return Err(Error::domain("random quiver needs a normal vertex and a star"));
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(rng);
        let mut arrows = vec![Arrow { tail: Vertex::Star(0), head: Vertex::Normal(order[0]) }];
        for w in order.windows(2) {
            arrows.push(Arrow { tail: Vertex::Normal(w[0]), head: Vertex::Normal(w[1]) });
        }
        arrows.push(Arrow { tail: Vertex::Normal(order[n - 1]), head: Vertex::Star(0) });
        for s in 1..stars {
            let v = Vertex::Normal(rng.gen_range(0..n));
            arrows.push(if rng.gen_bool(0.5) {
                Arrow { tail: Vertex::Star(s), head: v }
            } else {
                Arrow { tail: v, head: Vertex::Star(s) }
            });
        }
        let pick = |rng: &mut R| {
            let k = rng.gen_range(0..n + stars);
            if k < n {
                Vertex::Normal(k)
            } else {
                Vertex::Star(k - n)
            }
        };
        for _ in 0..extra {
            let (t, h) = (pick(rng), pick(rng));
            let star_pair = matches!((t, h), (Vertex::Star(_), Vertex::Star(_)));
            if t != h && !star_pair && !arrows.contains(&Arrow { tail: t, head: h }) {
                arrows.push(Arrow { tail: t, head: h });
            }
        }
        let normal = (1..=n).map(|i| format!("v{i}")).collect();
        let star_names = (0..stars).map(|s| format!("s{s}")).collect();
        Self::from_parts(normal, star_names, arrows, Vec::new())
    }
}

fn name_of<'a>(normal: &'a [String], stars: &'a [String], v: Vertex) -> &'a str {
    match v {
        Vertex::Normal(i) => &normal[i],
        Vertex::Star(s) => &stars[s],
    }
}

pub(crate) fn reachable(adj: &[Vec<usize>], start: usize) -> Vec<bool> {
    let mut seen = vec![false; adj.len()];
    if adj.is_empty() {
        return seen;
    }
    seen[start] = true;
    let mut queue = VecDeque::from([start]);
    while let Some(u) = queue.pop_front() {
        for &v in &adj[u] {
            if !seen[v] {
                seen[v] = true;
                queue.push_back(v);
            }
        }
    }
    seen
}

/// A plain quiver: named vertices and indexed arrows, parallel arrows allowed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quiver {
    pub vertices: Vec<String>,
    pub arrows: Vec<(usize, usize)>,
}

impl Quiver {
    pub fn new<S: AsRef<str>>(vertices: &[S], arrows: &[(S, S)]) -> Result<Self> {
        let vertices: Vec<String> = vertices.iter().map(|s| s.as_ref().to_string()).collect();
        let mut index = HashMap::new();
        for (i, v) in vertices.iter().enumerate() {
            if index.insert(v.clone(), i).is_some() {
                return Err(Error::invalid(format!("vertex {v:?} declared twice")));
            }
        }
        let mut out = Vec::with_capacity(arrows.len());
        for (t, h) in arrows {
            let get = |s: &str| index.get(s).copied().ok_or_else(|| Error::invalid(format!("unknown vertex {s:?}")));
            let (t, h) = (get(t.as_ref())?, get(h.as_ref())?);
            if t == h {
                return Err(Error::invalid("loops are not allowed"));
            }
            out.push((t, h));
        }
        Ok(Quiver { vertices, arrows: out })
    }

    /// A topological order, or `None` when there is an oriented cycle.
    pub fn topological_order(&self) -> Option<Vec<usize>> {
        let n = self.vertices.len();
        let mut indeg = vec![0usize; n];
        let mut out = vec![Vec::new(); n];
        for &(t, h) in &self.arrows {
            indeg[h] += 1;
            out[t].push(h);
        }
        let mut queue: VecDeque<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(u) = queue.pop_front() {
            order.push(u);
            for &v in &out[u] {
                indeg[v] -= 1;
                if indeg[v] == 0 {
                    queue.push_back(v);
                }
            }
        }
        (order.len() == n).then_some(order)
    }

    pub fn is_acyclic(&self) -> bool {
        self.topological_order().is_some()
    }

    pub fn is_connected(&self) -> bool {
        let mut adj = vec![Vec::new(); self.vertices.len()];
        for &(t, h) in &self.arrows {
            adj[t].push(h);
            adj[h].push(t);
        }
        reachable(&adj, 0).iter().all(|&r| r)
    }
}

/// Record of which vertex became the star in [`star_replace`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StarReplacement {
    pub quiver: StarredQuiver,
    /// Index (in the original vertex order) of the vertex that became `★`.
    pub replaced: usize,
}

impl StarReplacement {
    /// The coordinate projection `R^n → R^{n−1}` dropping the replaced vertex.
    pub fn projection(&self, n: usize) -> crate::exactlin::QMat {
        let mut m = crate::exactlin::QMat::zeros(n - 1, n);
        let mut r = 0;
        for c in 0..n {
            if c != self.replaced {
                m.set(r, c, crate::exactlin::Rat::one());
                r += 1;
            }
        }
        m
    }
}

/// Turns vertex `v` of an unstarred quiver into the star.
pub fn star_replace(q: &Quiver, v: &str) -> Result<StarReplacement> {
    let Some(idx) = q.vertices.iter().position(|x| x == v) else {
        return Err(Error::domain(format!("{v:?} is not a vertex")));
    };
    let normal: Vec<String> =
        q.vertices.iter().enumerate().filter(|&(i, _)| i != idx).map(|(_, s)| s.clone()).collect();
    let map = |i: usize| {
        if i == idx {
            Vertex::Star(0)
        } else if i < idx {
            Vertex::Normal(i)
        } else {
            Vertex::Normal(i - 1)
        }
    };
    let arrows = q.arrows.iter().map(|&(t, h)| Arrow { tail: map(t), head: map(h) }).collect();
    let log = vec![format!("starred vertex {v}")];
    let quiver = StarredQuiver::from_parts(normal, vec![v.to_string()], arrows, log)?;
    Ok(StarReplacement { quiver, replaced: idx })
}

/// Root polytope points of a quiver without stars: `e_h − e_t` in `R^{vertices}`.
pub fn unstarred_root_points(q: &Quiver) -> Vec<IVec> {
    let n = q.vertices.len();
    let mut pts: Vec<IVec> = q
        .arrows
        .iter()
        .map(|&(t, h)| {
            let mut p = vec![Int::zero(); n];
            p[h] += Int::one();
            p[t] -= Int::one();
            p
        })
        .collect();
    pts.sort();
    pts.dedup();
    pts
}

/// Stars every source and sink of an acyclic quiver.
pub fn from_acyclic(q: &Quiver) -> Result<StarredQuiver> {
    if !q.is_acyclic() {
        return Err(Error::domain("quiver has an oriented cycle"));
    }
    let n = q.vertices.len();
    let mut has_in = vec![false; n];
    let mut has_out = vec![false; n];
    for &(t, h) in &q.arrows {
        has_out[t] = true;
        has_in[h] = true;
    }
    let starred: Vec<bool> = (0..n).map(|v| !has_in[v] || !has_out[v]).collect();
    let mut normal = Vec::new();
    let mut stars = Vec::new();
    let mut map = Vec::with_capacity(n);
    for v in 0..n {
        if starred[v] {
            map.push(Vertex::Star(stars.len()));
            stars.push(q.vertices[v].clone());
        } else {
            map.push(Vertex::Normal(normal.len()));
            normal.push(q.vertices[v].clone());
        }
    }
    let arrows = q.arrows.iter().map(|&(t, h)| Arrow { tail: map[t], head: map[h] }).collect();
    let log = stars.iter().map(|s| format!("starred source/sink {s}")).collect();
    StarredQuiver::from_parts(normal, stars, arrows, log)
}
