//! Command-line front end: JSON documents in, reports out.
//!
//! Every command returns a [`Report`], printed either as an aligned text table
//! or as JSON. The text form parses back into the same report.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use num_traits::{One, Zero};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::exactlin::{Int, QVec, Rat};
use crate::facets::{facet_labelings, FacetLabeling};
use crate::fans::{fans_equal, normal_fan, refines};
use crate::planar::{flow_relations, verify_flow_duality, PlaneQuiver};
use crate::polytope::{f_vector, is_reflexive, is_terminal, polar_dual_h, Polytope};
use crate::poset::{
    bounded_extension, hasse_quiver, marked_order_polytope, max_extension, order_polytope, rank_marking, rank_point,
    FinitePoset, Marking, RankStatus, StarredPoset,
};
use crate::quiver::{Quiver, StarredQuiver};
use crate::toric::{
    canonical_extension, cartier_conditions, class_group, condition_text, default_weights, fano_index, inequality_text,
    picard_group, picard_group_general, small_resolution_fan, superpotential, superpotential_polytope,
    unimodular_triangulation,
};

/// Starred quiver document.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuiverDoc {
    pub normal_vertices: Vec<String>,
    #[serde(default)]
    pub starred_vertices: Vec<String>,
    pub arrows: Vec<(String, String)>,
}

/// Plane acyclic quiver document: a rotation system, or vertex coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlaneQuiverDoc {
    pub normal_vertices: Vec<String>,
    #[serde(default)]
    pub starred_vertices: Vec<String>,
    pub arrows: Vec<(String, String)>,
    /// Arrow ids around each vertex, counterclockwise.
    #[serde(default)]
    pub rotation: Option<BTreeMap<String, Vec<usize>>>,
    #[serde(default)]
    pub outer_face: Option<Vec<usize>>,
    #[serde(default)]
    pub coordinates: Option<BTreeMap<String, (i64, i64)>>,
}

/// Poset document; `stars` and `marks` are only needed for marked order polytopes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PosetDoc {
    pub elements: Vec<String>,
    pub covers: Vec<(String, String)>,
    #[serde(default)]
    pub stars: Vec<String>,
    #[serde(default)]
    pub marks: BTreeMap<String, i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Section {
    pub name: String,
    pub fields: Vec<(String, String)>,
    pub lines: Vec<String>,
    pub table: Option<Table>,
}

impl Section {
    fn new(name: &str) -> Self {
        Section { name: name.to_string(), ..Default::default() }
    }

    fn field(mut self, key: &str, value: impl ToString) -> Self {
        self.fields.push((key.to_string(), value.to_string()));
        self
    }

    fn lines(mut self, lines: impl IntoIterator<Item = String>) -> Self {
        self.lines.extend(lines);
        self
    }

    fn table(mut self, header: Vec<String>, rows: Vec<Vec<String>>) -> Self {
        self.table = Some(Table { header, rows });
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub title: String,
    pub sections: Vec<Section>,
}

impl Report {
    pub fn section(&self, name: &str) -> Option<&Section> {
        self.sections.iter().find(|s| s.name == name)
    }

    /// Value of `key` in section `name`.
    pub fn field(&self, name: &str, key: &str) -> Option<&str> {
        self.section(name)?.fields.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        parse_document(text)
    }

    /// Aligned plain text: `# title`, `## section`, `key: value`, `- line`, `| cell | ... |`.
    pub fn to_text(&self) -> String {
        let mut out = format!("# {}\n", self.title);
        for s in &self.sections {
            let _ = writeln!(out, "\n## {}", s.name);
            for (k, v) in &s.fields {
                let _ = writeln!(out, "{k}: {v}");
            }
            for l in &s.lines {
                let _ = writeln!(out, "- {l}");
            }
            if let Some(t) = &s.table {
                let cols = t.header.len();
                let mut width = vec![0; cols];
                for row in std::iter::once(&t.header).chain(&t.rows) {
                    for (w, c) in width.iter_mut().zip(row) {
                        *w = (*w).max(c.chars().count());
                    }
                }
                let render = |row: &Vec<String>| {
                    let cells: Vec<String> = row.iter().zip(&width).map(|(c, w)| format!("{c:>w$}", w = *w)).collect();
                    format!("| {} |", cells.join(" | "))
                };
                let _ = writeln!(out, "{}", render(&t.header));
                let rule: Vec<String> = width.iter().map(|w| "-".repeat(*w)).collect();
                let _ = writeln!(out, "|-{}-|", rule.join("-+-"));
                for row in &t.rows {
                    let _ = writeln!(out, "{}", render(row));
                }
            }
        }
        out
    }

    /// Inverse of [`Report::to_text`].
    pub fn from_text(text: &str) -> Result<Self, CliError> {
        let bad = |n: usize, msg: &str| CliError::Parse(format!("line {}: {msg}", n + 1));
        let mut lines = text.lines().enumerate();
        let title = match lines.next() {
            Some((_, l)) if l.starts_with("# ") => l[2..].to_string(),
            _ => return Err(bad(0, "expected a title line")),
        };
        let mut sections: Vec<Section> = Vec::new();
        let mut header_seen = false;
        for (n, line) in lines {
            if line.is_empty() {
                continue;
            }
            if let Some(name) = line.strip_prefix("## ") {
                sections.push(Section::new(name));
                header_seen = false;
                continue;
            }
            let s = sections.last_mut().ok_or_else(|| bad(n, "content before the first section"))?;
            if line.starts_with("|-") {
                continue;
            }
            if let Some(inner) = line.strip_prefix("| ").and_then(|l| l.strip_suffix(" |")) {
                let cells: Vec<String> = inner.split(" | ").map(|c| c.trim().to_string()).collect();
                if !header_seen {
                    s.table = Some(Table { header: cells, rows: Vec::new() });
                    header_seen = true;
                } else {
                    s.table.as_mut().expect("header first").rows.push(cells);
                }
            } else if let Some(l) = line.strip_prefix("- ") {
                s.lines.push(l.to_string());
            } else if let Some((k, v)) = line.split_once(": ") {
                s.fields.push((k.to_string(), v.to_string()));
            } else {
                return Err(bad(n, "unrecognized line"));
            }
        }
        Ok(Report { title, sections })
    }
}

/// Failures of a CLI run, each with its exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Lib(#[from] Error),
    #[error("cannot read {0}: {1}")]
    Io(PathBuf, std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) | CliError::Io(..) => 2,
            CliError::Lib(Error::Invalid(_) | Error::Dimension(_)) => 2,
            CliError::Lib(Error::Domain(_) | Error::Unbounded) => 3,
            CliError::Lib(Error::Invariant(_)) => 4,
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Parses a JSON document, reporting the line, column and field path of the first problem.
pub fn parse_document<T: DeserializeOwned>(text: &str) -> CliResult<T> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let inner = e.inner();
        CliError::Parse(format!("line {} column {}, field `{}`: {}", inner.line(), inner.column(), e.path(), inner))
    })
}

fn rat_text(x: &Rat) -> String {
    x.to_string()
}

fn vec_text(v: &[Rat]) -> String {
    format!("({})", v.iter().map(rat_text).collect::<Vec<_>>().join(", "))
}

fn ivec_text(v: &[Int]) -> String {
    format!("({})", v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", "))
}

/// Builds the starred quiver; a star-free document gets its first vertex starred.
pub fn quiver_from_doc(doc: &QuiverDoc) -> CliResult<StarredQuiver> {
    let (normal, stars, note) = if doc.starred_vertices.is_empty() {
        let first = doc.normal_vertices.first().ok_or_else(|| Error::domain("quiver has no vertices"))?;
        (
            doc.normal_vertices[1..].to_vec(),
            vec![first.clone()],
            Some(format!("no starred vertex given; starred {first}")),
        )
    } else {
        (doc.normal_vertices.clone(), doc.starred_vertices.clone(), None)
    };
    let q = StarredQuiver::new(&normal, &stars, &doc.arrows)?;
    Ok(match note {
        Some(n) => {
            let mut log = vec![n];
            log.extend(q.log().iter().cloned());
            let arrows = q.arrows().to_vec();
            StarredQuiver::from_parts(q.normal_vertices().to_vec(), q.starred_vertices().to_vec(), arrows, log)?
        }
        None => q,
    })
}

fn normalization_section(log: &[String]) -> Section {
    let s = Section::new("normalization").field("changes", log.len());
    s.lines(log.iter().cloned())
}

fn facet_rows(q: &StarredQuiver, facets: &[FacetLabeling]) -> (Vec<String>, Vec<Vec<String>>) {
    let mut header = vec!["1".to_string()];
    header.extend(q.normal_vertices().iter().cloned());
    header.push("on facet".into());
    let rows = facets
        .iter()
        .map(|f| {
            let mut row: Vec<String> = f.table_row().iter().map(|x| x.to_string()).collect();
            row.push(f.on_facet.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(","));
            row
        })
        .collect();
    (header, rows)
}

/// Vertices, facet table, f-vector and reflexive/terminal flags of `Root(Q)`.
pub fn cmd_root(doc: &QuiverDoc) -> CliResult<Report> {
    let q = quiver_from_doc(doc)?;
    q.require_strongly_connected()?;
    let v = q.root_vpolytope()?;
    let facets = facet_labelings(&q)?;
    let fv = f_vector(&v)?;
    let summary = Section::new("summary")
        .field("dimension", q.dim())
        .field("vertices", v.vertices().len())
        .field("facets", facets.len())
        .field("f-vector", format!("({})", fv.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")))
        .field("reflexive", is_reflexive(&v)?.holds())
        .field("terminal", is_terminal(&v)?);
    let points = q.root_vertices();
    let vertex_rows = points.iter().map(|p| vec![q.arrow_label(p.arrow), ivec_text(&p.point)]).collect();
    let (header, rows) = facet_rows(&q, &facets);
    Ok(Report {
        title: "root polytope".into(),
        sections: vec![
            normalization_section(q.log()),
            summary,
            Section::new("vertices").table(vec!["arrow".into(), "point".into()], vertex_rows),
            Section::new("facets").table(header, rows),
        ],
    })
}

/// Builds the plane quiver from a rotation system or from coordinates.
pub fn plane_quiver_from_doc(doc: &PlaneQuiverDoc) -> CliResult<PlaneQuiver> {
    if !doc.starred_vertices.is_empty() {
        return Err(Error::invalid("plane quivers have no starred vertices").into());
    }
    let quiver = Quiver::new(&doc.normal_vertices, &doc.arrows)?;
    let index = |name: &str| {
        doc.normal_vertices
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::invalid(format!("unknown vertex {name:?}")))
    };
    match (&doc.rotation, &doc.coordinates) {
        (Some(rot), None) => {
            let mut rotation = vec![Vec::new(); doc.normal_vertices.len()];
            for (name, ids) in rot {
                rotation[index(name)?] = ids.clone();
            }
            let outer = doc.outer_face.clone().ok_or_else(|| Error::invalid("rotation given without outer_face"))?;
            Ok(PlaneQuiver::new(quiver, rotation, outer)?)
        }
        (None, Some(coords)) => {
            let mut pts = vec![None; doc.normal_vertices.len()];
            for (name, &xy) in coords {
                pts[index(name)?] = Some(xy);
            }
            let pts: Vec<(i64, i64)> = pts
                .into_iter()
                .enumerate()
                .map(|(i, p)| p.ok_or_else(|| Error::invalid(format!("no coordinates for {}", doc.normal_vertices[i]))))
                .collect::<Result<_, _>>()?;
            Ok(PlaneQuiver::from_coordinates(quiver, &pts)?)
        }
        _ => Err(Error::invalid("give exactly one of rotation (with outer_face) or coordinates").into()),
    }
}

/// Planar dual, flow polytope, root polytope of the dual, and the duality verdict.
pub fn cmd_flowdual(doc: &PlaneQuiverDoc) -> CliResult<Report> {
    let pq = plane_quiver_from_doc(doc)?;
    let d = verify_flow_duality(&pq)?;
    let dq = &d.dual.quiver;
    let dual_rows = (0..pq.quiver().arrows.len())
        .map(|a| {
            let (t, h) = pq.quiver().arrows[a];
            let primal = format!("{}->{}", pq.quiver().vertices[t], pq.quiver().vertices[h]);
            let dual = d.dual.dual_arrow[a].map_or("bridge".to_string(), |b| dq.arrow_label(b));
            vec![a.to_string(), primal, dual]
        })
        .collect();
    let flow_rows =
        d.flow_vertices.iter().map(|z| vec![vec_text(z), vec_text(&d.flow.to_arrow_coordinates(z))]).collect();
    let root_rows = dq.root_vertices().iter().map(|p| vec![dq.arrow_label(p.arrow), ivec_text(&p.point)]).collect();
    let verdict = Section::new("verdict")
        .field("duality", d.holds)
        .field("flow polytope reflexive", d.flow_reflexive)
        .field("flow dimension", d.flow.dim())
        .field("bridges", d.dual.bridges.len());
    Ok(Report {
        title: "flow duality".into(),
        sections: vec![
            normalization_section(dq.log()),
            verdict,
            Section::new("relations").lines(flow_relations(pq.quiver())),
            Section::new("dual quiver").table(vec!["arrow".into(), "primal".into(), "dual".into()], dual_rows),
            Section::new("flow polytope").table(vec!["z".into(), "flow".into()], flow_rows),
            Section::new("dual root polytope").table(vec!["arrow".into(), "point".into()], root_rows),
        ],
    })
}

/// Which poset artifacts to produce.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct PosetFlags {
    pub order: bool,
    pub marked: bool,
    pub fan_compare: bool,
    pub picard: bool,
    pub canonical: bool,
}

fn poset_from_doc(doc: &PosetDoc) -> CliResult<FinitePoset> {
    Ok(FinitePoset::new(&doc.elements, &doc.covers)?)
}

fn rank_status_text(p: &FinitePoset) -> &'static str {
    match p.rank_status() {
        RankStatus::Ranked => "ranked",
        RankStatus::GeneralizedOnly => "ranked in the generalized sense only",
        RankStatus::NotRanked => "not ranked",
    }
}

pub fn cmd_poset(doc: &PosetDoc, flags: PosetFlags) -> CliResult<Report> {
    let p = poset_from_doc(doc)?;
    let flags = if flags == PosetFlags::default() { PosetFlags { order: true, ..flags } } else { flags };
    let mut sections = vec![Section::new("poset")
        .field("elements", p.len())
        .field("covers", p.covers().len())
        .field("rank status", rank_status_text(&p))
        .field("graded", p.is_graded())];
    let names = |ids: &[usize], p: &FinitePoset| ids.iter().map(|&i| p.elements()[i].clone()).collect::<Vec<_>>();

    if flags.order {
        let h = order_polytope(&p);
        let poly = Polytope::from_h(&h)?;
        sections.push(
            Section::new("order polytope")
                .field("variables", p.elements().join(", "))
                .field("vertices", poly.vertices().len())
                .field("filters", p.filters().len())
                .field("linear extensions", p.linear_extension_count())
                .lines(h.inequalities().iter().map(|i| inequality_text(i, "f"))),
        );
    }

    if flags.marked {
        let sp =
            if doc.stars.is_empty() { bounded_extension(&p) } else { StarredPoset::from_names(p.clone(), &doc.stars)? };
        let marks: Marking = if doc.marks.is_empty() {
            rank_marking(&sp).map_err(|e| match e {
                Error::Domain(m) => Error::Domain(format!(
                    "{m}; the rank-marked order polytope needs a ranked poset, or give explicit marks"
                )),
                other => other,
            })?
        } else {
            let mut m = Marking::new();
            for (name, &v) in &doc.marks {
                let i = sp.poset.index_of(name).ok_or_else(|| Error::invalid(format!("unknown mark {name:?}")))?;
                m.insert(i, Int::from(v));
            }
            m
        };
        let normal = sp.normal_elements();
        let h = marked_order_polytope(&sp, &marks)?;
        let mut s = Section::new("marked order polytope")
            .field("variables", names(&normal, &sp.poset).join(", "))
            .lines(h.inequalities().iter().map(|i| inequality_text(i, "f")));
        if doc.marks.is_empty() || sp.poset.rank_function().is_some() {
            if let Ok(u) = rank_point(&sp) {
                let shifted = h.translate_back(&u.iter().map(|x| Rat::from_integer(x.clone())).collect::<QVec>());
                let q = hasse_quiver(&sp)?;
                let dual = polar_dual_h(&shifted)?;
                s = s
                    .field("interior point", ivec_text(&u))
                    .field("dual is root polytope", dual == q.root_vpolytope()?);
                sections.push(s);
                sections.push(
                    Section::new("shifted marked order polytope")
                        .lines(shifted.inequalities().iter().map(|i| inequality_text(i, "F"))),
                );
            } else {
                sections.push(s);
            }
        } else {
            sections.push(s);
        }
    }

    if flags.fan_compare {
        let q = hasse_quiver(&bounded_extension(&p))?;
        let face = crate::facets::face_fan(&q)?;
        let normal = normal_fan(&Polytope::from_h(&order_polytope(&p))?)?;
        let r = refines(&face, &normal)?;
        let mut s = Section::new("fan comparison")
            .field("rays equal", r.rays_equal)
            .field("refines", r.holds)
            .field("equal", fans_equal(&face, &normal)?);
        if let Some(w) = r.witness() {
            s = s.field(
                "witness cone",
                face.cone_generators(w).iter().map(|g| ivec_text(g)).collect::<Vec<_>>().join(" "),
            );
        }
        sections.push(s);
    }

    if flags.picard || flags.canonical {
        let ext = canonical_extension(&p)?;
        if flags.canonical {
            let e = ext.poset.poset.elements();
            sections.push(
                Section::new("canonical extension")
                    .field("elements", e.join(", "))
                    .field("stars", names(ext.poset.stars(), &ext.poset.poset).join(", "))
                    .field("maximal elements", ext.poset.poset.maximal().len())
                    .lines(ext.poset.poset.covers().iter().map(|&(a, b)| format!("{} < {}", e[a], e[b]))),
            );
        }
        if flags.picard {
            let q = hasse_quiver(&ext.poset)?;
            let pic = picard_group(&q)?;
            let qmax = hasse_quiver(&max_extension(&p))?;
            let cl = class_group(&qmax)?;
            let mut s = Section::new("picard")
                .field("maximal elements of P", p.maximal().len())
                .field("maximal elements of canonical extension", ext.poset.poset.maximal().len())
                .field("picard rank", pic.group.rank())
                .field("picard torsion", ivec_text(pic.group.torsion()))
                .field("class group rank (maximal extension)", cl.rank())
                .field("class group torsion", ivec_text(cl.torsion()));
            if let Some(w) = &pic.warning {
                s = s.field("warning", w);
            }
            s = s.lines(pic.generators.iter().map(|d| divisor_text(&q, d)));
            sections.push(s);
        }
    }
    Ok(Report { title: "poset".into(), sections })
}

fn divisor_text(q: &StarredQuiver, d: &[Int]) -> String {
    let terms: Vec<String> = d
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(a, c)| if c.is_one() { format!("D_{a}") } else { format!("{c} D_{a}") })
        .collect();
    let star = q.arrows().iter().zip(d).find(|(_, c)| !c.is_zero()).map(|(a, _)| q.vertex_name(a.head));
    format!("{} (into {})", terms.join(" + "), star.unwrap_or("?"))
}

/// Which toric extras to compute on top of the summary.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ToricFlags {
    pub resolve: bool,
    pub superpotential: Option<Vec<Rat>>,
    pub fano_index: bool,
}

pub fn cmd_toric(doc: &QuiverDoc, flags: &ToricFlags) -> CliResult<Report> {
    let q = quiver_from_doc(doc)?;
    q.require_strongly_connected()?;
    let v = q.root_vpolytope()?;
    let t = small_resolution_fan(&q)?;
    let facets = facet_labelings(&q)?;
    let cl = class_group(&q)?;
    let pic = picard_group_general(&q)?;
    let conditions = cartier_conditions(&q)?;
    let summary = Section::new("summary")
        .field("reflexive", is_reflexive(&v)?.holds())
        .field("terminal", is_terminal(&v)?)
        .field("facets", facets.len())
        .field("singular cones", t.subdivided.len())
        .field("triangulation size", t.cones.len())
        .field("class group rank", cl.rank())
        .field("class group torsion", ivec_text(cl.torsion()))
        .field("picard rank", pic.rank())
        .field("picard torsion", ivec_text(pic.torsion()));
    let mut sections = vec![
        normalization_section(q.log()),
        summary,
        Section::new("arrows").lines((0..q.arrows().len()).map(|a| format!("a_{a}: {}", q.arrow_label(a)))),
        Section::new("cartier conditions").lines(conditions.iter().map(|k| condition_text(k))),
    ];
    if flags.resolve {
        let mut s = Section::new("resolution");
        if t.subdivided.is_empty() {
            s = s.field("status", "already smooth, 0 subdivisions");
        } else {
            s = s.field("status", format!("{} cones subdivided", t.subdivided.len()));
        }
        let tri = unimodular_triangulation(&q)?;
        s = s.field("unimodular simplices", tri.simplices.len());
        let rows = t
            .cones
            .iter()
            .zip(&t.parent)
            .map(|(c, p)| vec![p.to_string(), c.iter().map(|&r| ivec_text(&t.rays[r])).collect::<Vec<_>>().join(" ")])
            .collect();
        sections.push(s.table(vec!["facet cone".into(), "rays".into()], rows));
    }
    if let Some(r) = &flags.superpotential {
        let s = superpotential(&q, &default_weights(&q))?;
        if r.len() != s.nparams {
            return Err(Error::Dimension(format!(
                "{} parameter values given, the superpotential has {} quantum parameters",
                r.len(),
                s.nparams
            ))
            .into());
        }
        let gamma = superpotential_polytope(&s, r)?;
        sections.push(
            Section::new("superpotential")
                .field("S", s.text())
                .field("r", vec_text(r))
                .lines(gamma.inequalities().iter().map(|i| inequality_text(i, "X"))),
        );
    }
    if flags.fano_index {
        sections.push(Section::new("fano").field("fano index", fano_index(&q)?));
    }
    Ok(Report { title: "toric".into(), sections })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Machine,
}

/// Root polytopes, flow duality, poset polytopes and toric invariants of quivers.
#[derive(Debug, Parser)]
#[command(name = "rootpoly", version)]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
    /// Output format.
    #[arg(long, value_enum, default_value = "table", global = true)]
    pub format: Format,
    /// Print progress to stderr.
    #[arg(short, long, global = true)]
    pub verbose: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Vertices, facets and f-vector of the root polytope of a quiver document.
    Root { input: PathBuf },
    /// Planar dual and flow-polytope duality for a plane quiver document.
    Flowdual { input: PathBuf },
    /// Order, marked order, fan comparison and Picard data for a poset document.
    Poset {
        input: PathBuf,
        #[arg(long)]
        order: bool,
        #[arg(long)]
        marked: bool,
        #[arg(long)]
        fan_compare: bool,
        #[arg(long)]
        picard: bool,
        #[arg(long)]
        canonical: bool,
    },
    /// Toric invariants of the face fan of a quiver's root polytope.
    Toric {
        input: PathBuf,
        #[arg(long)]
        resolve: bool,
        /// Parameter values, e.g. `r=1,1`.
        #[arg(long, value_name = "r=..")]
        superpotential: Option<String>,
        #[arg(long)]
        fano_index: bool,
    },
}

/// Parses `r=1,1/2` (the `r=` prefix is optional; empty means no parameters).
pub fn parse_parameters(text: &str) -> CliResult<Vec<Rat>> {
    let body = text.strip_prefix("r=").unwrap_or(text).trim();
    if body.is_empty() {
        return Ok(Vec::new());
    }
    body.split(',')
        .map(|s| s.trim().parse::<Rat>().map_err(|_| CliError::Parse(format!("bad parameter value {s:?}"))))
        .collect()
}

fn read(path: &PathBuf) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io(path.clone(), e))
}

/// Runs one parsed invocation.
pub fn execute(config: &RunConfig) -> CliResult<Report> {
    match &config.command {
        Command::Root { input } => cmd_root(&parse_document(&read(input)?)?),
        Command::Flowdual { input } => cmd_flowdual(&parse_document(&read(input)?)?),
        Command::Poset { input, order, marked, fan_compare, picard, canonical } => {
            let flags = PosetFlags {
                order: *order,
                marked: *marked,
                fan_compare: *fan_compare,
                picard: *picard,
                canonical: *canonical,
            };
            cmd_poset(&parse_document(&read(input)?)?, flags)
        }
        Command::Toric { input, resolve, superpotential, fano_index } => {
            let flags = ToricFlags {
                resolve: *resolve,
                superpotential: superpotential.as_deref().map(parse_parameters).transpose()?,
                fano_index: *fano_index,
            };
            cmd_toric(&parse_document(&read(input)?)?, &flags)
        }
    }
}

/// Entry point for the binary; returns the process exit code.
pub fn run<I, T>(args: I, out: &mut impl std::io::Write, err: &mut impl std::io::Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(err, "{e}");
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    if let Ok(n) = std::env::var("ROOTPOLY_THREADS") {
        if let Ok(n) = n.parse::<usize>() {
            // a second initialization (e.g. in tests) is harmless
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
    if config.verbose {
        let _ = writeln!(err, "running {:?}", config.command);
    }
    match execute(&config) {
        Ok(report) => {
            let text = match config.format {
                Format::Table => report.to_text(),
                Format::Machine => report.to_json() + "\n",
            };
            let _ = out.write_all(text.as_bytes());
            0
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
