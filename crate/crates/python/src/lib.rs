//! Python bindings for `rootpoly`.
//!
//! Integers cross the boundary as Python ints, rationals as strings like `"1/2"`.

use num_bigint::BigInt;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use rootpoly::exactlin::Rat;
use rootpoly::facets::{face_fan, facet_labelings};
use rootpoly::fans::{fans_equal, normal_fan, refines};
use rootpoly::planar::{flow_relations, verify_flow_duality, PlaneQuiver};
use rootpoly::polytope::{f_vector, is_reflexive, is_terminal, normalized_volume, Polytope};
use rootpoly::poset::{bounded_extension, hasse_quiver, order_polytope, FinitePoset, RankStatus};
use rootpoly::toric::{
    canonical_extension, cartier_conditions, class_group, condition_text, default_weights, fano_index, inequality_text,
    picard_group_general, small_resolution_fan, superpotential, superpotential_polytope, unimodular_triangulation,
};
use rootpoly::Error;

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Invariant(_) => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn rat_text(x: &Rat) -> String {
    x.to_string()
}

fn parse_rats(values: &[Bound<'_, PyAny>]) -> PyResult<Vec<Rat>> {
    values
        .iter()
        .map(|v| {
            let s = v.str()?.to_string();
            s.trim().parse::<Rat>().map_err(|_| PyValueError::new_err(format!("not a rational number: {s:?}")))
        })
        .collect()
}

/// A starred quiver; stars are given separately from the normal vertices.
#[pyclass(name = "StarredQuiver", frozen)]
pub struct PyStarredQuiver {
    inner: rootpoly::quiver::StarredQuiver,
}

#[pymethods]
impl PyStarredQuiver {
    #[new]
    fn new(normal: Vec<String>, stars: Vec<String>, arrows: Vec<(String, String)>) -> PyResult<Self> {
        let inner = rootpoly::quiver::StarredQuiver::new(&normal, &stars, &arrows).map_err(to_py)?;
        Ok(PyStarredQuiver { inner })
    }

    /// `n` normal vertices and one star, every pair joined both ways.
    #[staticmethod]
    fn complete_bidirected(n: usize) -> PyResult<Self> {
        Ok(PyStarredQuiver { inner: rootpoly::quiver::StarredQuiver::complete_bidirected(n).map_err(to_py)? })
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    /// Arrows as `tail->head` labels after cleanup.
    #[getter]
    fn arrows(&self) -> Vec<String> {
        (0..self.inner.arrows().len()).map(|a| self.inner.arrow_label(a)).collect()
    }

    #[getter]
    fn normalization_log(&self) -> Vec<String> {
        self.inner.log().to_vec()
    }

    fn is_strongly_connected(&self) -> bool {
        self.inner.is_strongly_connected()
    }

    /// One point per arrow, in arrow order.
    fn root_points(&self) -> Vec<Vec<BigInt>> {
        self.inner.root_points()
    }

    fn f_vector(&self) -> PyResult<Vec<usize>> {
        f_vector(&self.inner.root_vpolytope().map_err(to_py)?).map_err(to_py)
    }

    fn is_reflexive(&self) -> PyResult<bool> {
        Ok(is_reflexive(&self.inner.root_vpolytope().map_err(to_py)?).map_err(to_py)?.holds())
    }

    fn is_terminal(&self) -> PyResult<bool> {
        is_terminal(&self.inner.root_vpolytope().map_err(to_py)?).map_err(to_py)
    }

    fn normalized_volume(&self) -> PyResult<String> {
        Ok(rat_text(&normalized_volume(&self.inner.root_polytope().map_err(to_py)?).map_err(to_py)?))
    }

    /// Facet labelings as dicts with `bullet`, `arrows` and `on_facet`.
    fn facet_labelings<'py>(&self, py: Python<'py>) -> PyResult<Vec<Bound<'py, PyDict>>> {
        facet_labelings(&self.inner)
            .map_err(to_py)?
            .into_iter()
            .map(|f| {
                let d = PyDict::new(py);
                d.set_item("bullet", f.bullet)?;
                d.set_item("arrows", f.arrows)?;
                d.set_item("on_facet", f.on_facet)?;
                Ok(d)
            })
            .collect()
    }

    fn cartier_conditions(&self) -> PyResult<Vec<String>> {
        Ok(cartier_conditions(&self.inner).map_err(to_py)?.iter().map(|k| condition_text(k)).collect())
    }

    fn picard_rank(&self) -> PyResult<usize> {
        Ok(picard_group_general(&self.inner).map_err(to_py)?.rank())
    }

    fn class_group_rank(&self) -> PyResult<usize> {
        Ok(class_group(&self.inner).map_err(to_py)?.rank())
    }

    fn fano_index(&self) -> PyResult<BigInt> {
        fano_index(&self.inner).map_err(to_py)
    }

    /// Number of face-fan cones the small resolution subdivides.
    fn subdivided_cones(&self) -> PyResult<usize> {
        Ok(small_resolution_fan(&self.inner).map_err(to_py)?.subdivided.len())
    }

    fn triangulation_size(&self) -> PyResult<usize> {
        Ok(unimodular_triangulation(&self.inner).map_err(to_py)?.simplices.len())
    }

    /// The superpotential with default weights, as text.
    fn superpotential(&self) -> PyResult<String> {
        Ok(superpotential(&self.inner, &default_weights(&self.inner)).map_err(to_py)?.text())
    }

    /// Inequalities of the superpotential polytope for parameter values `r`.
    fn superpotential_polytope(&self, r: Vec<Bound<'_, PyAny>>) -> PyResult<Vec<String>> {
        let s = superpotential(&self.inner, &default_weights(&self.inner)).map_err(to_py)?;
        let h = superpotential_polytope(&s, &parse_rats(&r)?).map_err(to_py)?;
        Ok(h.inequalities().iter().map(|i| inequality_text(i, "X")).collect())
    }

    fn __repr__(&self) -> String {
        format!(
            "StarredQuiver({} normal, {} starred, {} arrows)",
            self.inner.dim(),
            self.inner.starred_vertices().len(),
            self.inner.arrows().len()
        )
    }
}

/// A finite poset given by its cover relations.
#[pyclass(name = "Poset", frozen)]
pub struct PyPoset {
    inner: FinitePoset,
}

#[pymethods]
impl PyPoset {
    #[new]
    fn new(elements: Vec<String>, covers: Vec<(String, String)>) -> PyResult<Self> {
        Ok(PyPoset { inner: FinitePoset::new(&elements, &covers).map_err(to_py)? })
    }

    /// `"ranked"`, `"generalized"` or `"not ranked"`.
    fn rank_status(&self) -> &'static str {
        match self.inner.rank_status() {
            RankStatus::Ranked => "ranked",
            RankStatus::GeneralizedOnly => "generalized",
            RankStatus::NotRanked => "not ranked",
        }
    }

    fn is_graded(&self) -> bool {
        self.inner.is_graded()
    }

    fn linear_extension_count(&self) -> u128 {
        self.inner.linear_extension_count()
    }

    /// Filters as lists of element names.
    fn filters(&self) -> Vec<Vec<String>> {
        let names = self.inner.elements();
        self.inner.filters().into_iter().map(|f| f.into_iter().map(|i| names[i].clone()).collect()).collect()
    }

    fn order_polytope_volume(&self) -> PyResult<String> {
        let p = Polytope::from_h(&order_polytope(&self.inner)).map_err(to_py)?;
        Ok(rat_text(&normalized_volume(&p).map_err(to_py)?))
    }

    /// Hasse quiver of the bounded extension.
    fn hasse_quiver(&self) -> PyResult<PyStarredQuiver> {
        Ok(PyStarredQuiver { inner: hasse_quiver(&bounded_extension(&self.inner)).map_err(to_py)? })
    }

    /// Face fan of the Hasse quiver against the normal fan of the order polytope.
    fn fan_compare<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let q = hasse_quiver(&bounded_extension(&self.inner)).map_err(to_py)?;
        let face = face_fan(&q).map_err(to_py)?;
        let normal = normal_fan(&Polytope::from_h(&order_polytope(&self.inner)).map_err(to_py)?).map_err(to_py)?;
        let r = refines(&face, &normal).map_err(to_py)?;
        let d = PyDict::new(py);
        d.set_item("rays_equal", r.rays_equal)?;
        d.set_item("refines", r.holds)?;
        d.set_item("equal", fans_equal(&face, &normal).map_err(to_py)?)?;
        d.set_item("witness", r.witness().map(|w| face.cone_generators(w)))?;
        Ok(d)
    }

    /// Elements of the canonical extension and the Picard rank of its Hasse quiver.
    fn canonical_extension<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let ext = canonical_extension(&self.inner).map_err(to_py)?;
        let q = hasse_quiver(&ext.poset).map_err(to_py)?;
        let d = PyDict::new(py);
        d.set_item("elements", ext.poset.poset.elements().to_vec())?;
        d.set_item("maximal", ext.poset.poset.maximal().len())?;
        d.set_item("picard_rank", picard_group_general(&q).map_err(to_py)?.rank())?;
        Ok(d)
    }
}

/// Flow-polytope duality for a plane acyclic quiver drawn with straight arrows.
#[pyfunction]
fn flow_duality<'py>(
    py: Python<'py>,
    vertices: Vec<String>,
    arrows: Vec<(String, String)>,
    coordinates: Vec<(i64, i64)>,
) -> PyResult<Bound<'py, PyDict>> {
    let q = rootpoly::quiver::Quiver::new(&vertices, &arrows).map_err(to_py)?;
    let pq = PlaneQuiver::from_coordinates(q, &coordinates).map_err(to_py)?;
    let r = verify_flow_duality(&pq).map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("holds", r.holds)?;
    d.set_item("flow_reflexive", r.flow_reflexive)?;
    d.set_item("relations", flow_relations(pq.quiver()))?;
    d.set_item("dual_dim", r.dual.quiver.dim())?;
    d.set_item("bridges", r.dual.bridges)?;
    Ok(d)
}

/// Runs the command-line interface; returns `(exit_code, stdout, stderr)`.
#[pyfunction]
fn run_cli(args: Vec<String>) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("rootpoly".to_string()).chain(args);
    let code = rootpoly::cli::run(argv, &mut out, &mut err);
    (code, String::from_utf8_lossy(&out).into_owned(), String::from_utf8_lossy(&err).into_owned())
}

#[pymodule]
#[pyo3(name = "rootpoly")]
pub fn rootpoly_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyStarredQuiver>()?;
    m.add_class::<PyPoset>()?;
    m.add_function(wrap_pyfunction!(flow_duality, m)?)?;
    m.add_function(wrap_pyfunction!(run_cli, m)?)?;
    Ok(())
}
