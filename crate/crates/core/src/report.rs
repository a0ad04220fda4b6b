//! Analysis reports for each input kind and the per-fan crosscheck.
//!
//! Reports hold no timing data, so identical inputs give identical output.

use std::fmt::Write as _;

use serde::Serialize;

use crate::bc::{
    link_correspondence_check, orbit_space_e2, BcError, FaceClass, FaceStructure, OrbitE2, Space,
};
use crate::exactla::GradedDims;
use crate::fan::{Fan, ValidationReport};
use crate::gkm::{cs_kernel_dims, GkmError, GkmGraph};
use crate::simplicial::SimplicialComplex;
use crate::stanley::{
    depth_local_cohomology, depth_pd, ext_decomposition_check, ext_table, face_ring_presentation,
    stanley_reisner_ideal, syzygy_order_oracle, ExtCheck, FaceRingPresentation, IdealError,
};
use crate::syzygy::{
    compact_dichotomy_check, syzygy_order_faces, syzygy_order_links, torus_manifold_report,
    DichotomyReport, LinkBound, SyzygyReport, TorusManifoldReport,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Options {
    pub oracle: bool,
    pub max_degree: i32,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            oracle: false,
            max_degree: 20,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InputSummary {
    pub kind: String,
    pub rank: usize,
    /// Cones, faces, vertices or fixed points, depending on the kind.
    pub size: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub class: Option<FaceClass>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub validation: Option<ValidationReport>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExtRow {
    pub index: usize,
    pub series: String,
    /// `(N, f_i(N))` for nonzero cells.
    pub cells: Vec<(Vec<usize>, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RingReport {
    pub ideal: Vec<Vec<usize>>,
    pub ext: Vec<ExtRow>,
    /// `(depth, pd)` from the Ext table; absent for the unit ideal.
    pub depth_pd: Option<(usize, usize)>,
    pub depth_local_cohomology: Option<usize>,
    pub ext_decomposition: ExtCheck,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Report {
    pub input: InputSummary,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub order: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub faces: Option<SyzygyReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub links: Option<SyzygyReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub links_printed_order: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<SyzygyReport>,
    /// All computed orders coincide and every internal consistency check passed.
    pub agreement: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub face_ring: Option<FaceRingPresentation>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub e2: Option<OrbitE2>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub torus_manifold: Option<TorusManifoldReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dichotomy: Option<DichotomyReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ring: Option<RingReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kernel: Option<GradedDims>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AnalyzeError {
    #[error(transparent)]
    Bc(#[from] BcError),
    #[error(transparent)]
    Ideal(#[from] IdealError),
    #[error(transparent)]
    Gkm(#[from] GkmError),
    #[error(transparent)]
    Fan(#[from] crate::fan::FanError),
}

fn empty_report(input: InputSummary) -> Report {
    Report {
        input,
        order: None,
        faces: None,
        links: None,
        links_printed_order: None,
        oracle: None,
        agreement: true,
        face_ring: None,
        e2: None,
        torus_manifold: None,
        dichotomy: None,
        ring: None,
        kernel: None,
        warnings: Vec::new(),
    }
}

pub fn analyze_fan(fan: &Fan, opts: Options) -> Result<Report, AnalyzeError> {
    let input = InputSummary {
        kind: "fan".into(),
        rank: fan.rank(),
        size: fan.cones().len(),
        class: None,
        validation: Some(Fan::validate(fan.rank(), fan.rays(), fan.maximal_cones())),
    };
    let mut report = empty_report(input);
    let space = Space::Fan(fan.clone());
    let faces = syzygy_order_faces(&space)?;
    let links = syzygy_order_links(fan, LinkBound::Derived);
    let printed = syzygy_order_links(fan, LinkBound::Printed).order;
    let order = faces.order;
    let mut agree = links.order == order;
    if printed != order {
        report.warnings.push(format!(
            "the printed link bound gives order {printed}, the derived bound {}",
            links.order
        ));
    }
    if opts.oracle {
        let oracle = syzygy_order_oracle(fan);
        agree &= oracle.order == order;
        report.oracle = Some(oracle);
    }
    match face_ring_presentation(&space) {
        Ok(p) => report.face_ring = Some(p),
        Err(e) => report.warnings.push(format!("face ring: {e}")),
    }
    report.e2 = Some(orbit_space_e2(&space, order)?);
    if fan.is_complete_combinatorial() {
        report.dichotomy = compact_dichotomy_check(&space).ok();
    }
    report.order = Some(order);
    report.faces = Some(faces);
    report.links = Some(links);
    report.links_printed_order = Some(printed);
    report.agreement = agree && report.dichotomy.as_ref().is_none_or(|d| d.holds);
    Ok(report)
}

pub fn analyze_facestruct(s: &FaceStructure, opts: Options) -> Result<Report, AnalyzeError> {
    let input = InputSummary {
        kind: "facestruct".into(),
        rank: s.rank(),
        size: s.faces().len(),
        class: Some(s.class()),
        validation: None,
    };
    let mut report = empty_report(input);
    let space = Space::Faces(s.clone());
    let faces = syzygy_order_faces(&space)?;
    let order = faces.order;
    report.e2 = Some(orbit_space_e2(&space, order)?);
    if s.class() != FaceClass::Raw {
        let tm = torus_manifold_report(s)?;
        report.agreement = tm.consistent;
        report.torus_manifold = Some(tm);
        match face_ring_presentation(&space) {
            Ok(p) => report.face_ring = Some(p),
            Err(e) => report.warnings.push(format!("face ring: {e}")),
        }
    }
    if s.class() == FaceClass::Polytopal && s.faces().iter().all(|f| f.compact) {
        let d = compact_dichotomy_check(&space).ok();
        report.agreement &= d.as_ref().is_none_or(|d| d.holds);
        report.dichotomy = d;
    }
    if opts.oracle {
        report
            .warnings
            .push("the depth oracle applies to fans and complexes only".into());
    }
    report.order = Some(order);
    report.faces = Some(faces);
    Ok(report)
}

/// Rays `e_v` for the used vertices of `k`, cones the faces of `k`.
pub fn coordinate_fan(k: &SimplicialComplex) -> Result<Fan, crate::fan::FanError> {
    let n = k.vertex_count();
    let used = k.used_vertices();
    let rays = used
        .iter()
        .map(|&v| {
            let mut e = vec![0; n];
            e[v] = 1;
            e
        })
        .collect();
    let cones = k
        .facets()
        .iter()
        .map(|f| f.iter().map(|v| used.binary_search(v).unwrap()).collect())
        .collect();
    Fan::new(n, rays, cones)
}

pub fn ring_report(k: &SimplicialComplex) -> Result<RingReport, IdealError> {
    let ideal = stanley_reisner_ideal(k)?;
    let table = ext_table(&ideal);
    let ext = table
        .indices()
        .into_iter()
        .map(|i| ExtRow {
            index: i,
            series: table.series(i).to_string(),
            cells: table
                .cells()
                .filter(|c| c.0 == i)
                .map(|(_, n, d)| (n, d))
                .collect(),
        })
        .collect();
    Ok(RingReport {
        ideal: ideal.generators(),
        ext,
        depth_pd: depth_pd(&ideal),
        depth_local_cohomology: depth_local_cohomology(k),
        ext_decomposition: ext_decomposition_check(k)?,
    })
}

/// The complex is analysed as the coordinate fan in `Q^n`; the ring part
/// is computed on all `n` variables.
pub fn analyze_complex(k: &SimplicialComplex, opts: Options) -> Result<Report, AnalyzeError> {
    let input = InputSummary {
        kind: "complex".into(),
        rank: k.vertex_count(),
        size: k.vertex_count(),
        class: None,
        validation: None,
    };
    let ring = ring_report(k)?;
    let mut report = if k.is_void() {
        let mut r = empty_report(input);
        r.warnings.push("void complex: no coordinate fan".into());
        r
    } else {
        let mut r = analyze_fan(&coordinate_fan(k)?, opts)?;
        r.input = input;
        r
    };
    if k.used_vertices().len() < k.vertex_count() {
        report
            .warnings
            .push("unused vertices become invertible coordinates of the coordinate fan".into());
    }
    let consistent = ring.ext_decomposition.passed
        && match (ring.depth_pd, ring.depth_local_cohomology) {
            (Some((d, _)), Some(l)) => d == l,
            (None, None) => true,
            _ => false,
        };
    report.agreement &= consistent;
    report.ring = Some(ring);
    Ok(report)
}

pub fn analyze_gkm(g: &GkmGraph, opts: Options) -> Result<Report, AnalyzeError> {
    let input = InputSummary {
        kind: "gkm".into(),
        rank: g.rank(),
        size: g.vertices().len(),
        class: None,
        validation: None,
    };
    let mut report = empty_report(input);
    report.kernel = Some(cs_kernel_dims(g, opts.max_degree)?);
    let r = g.rank();
    if r <= 2 && *g == GkmGraph::from_punctured_cube(r) {
        report.warnings.push(format!(
            "punctured cube of rank {r} has syzygy order {} < 2; the kernel only bounds H_T^* from above",
            r.saturating_sub(1)
        ));
    }
    Ok(report)
}

fn dims_line(g: &GradedDims) -> String {
    g.to_string()
}

fn orders_line(label: &str, r: &SyzygyReport) -> String {
    let kind = if r.free {
        "free"
    } else if r.torsion_free {
        "torsion-free"
    } else {
        "torsion"
    };
    format!("{label}: order {} of {} ({kind})", r.order, r.rank)
}

/// Human-readable rendering.
pub fn render_text(r: &Report) -> String {
    let mut s = String::new();
    let i = &r.input;
    let _ = writeln!(s, "input: {} rank {} size {}", i.kind, i.rank, i.size);
    if let Some(c) = i.class {
        let _ = writeln!(s, "class: {c}");
    }
    if let Some(v) = &i.validation {
        let _ = writeln!(s, "validation: {v}");
    }
    if let Some(o) = r.order {
        let _ = writeln!(s, "syzygy order: {o}");
    }
    if let Some(f) = &r.faces {
        let _ = writeln!(s, "{}", orders_line("faces", f));
        for d in &f.faces {
            let h: Vec<String> = d.cohomology.iter().map(dims_line).collect();
            let _ = writeln!(
                s,
                "  {} rank {}: H = [{}] permits {}",
                d.face,
                d.rank,
                h.join(", "),
                d.permitted
            );
        }
    }
    if let Some(l) = &r.links {
        let _ = writeln!(s, "{}", orders_line("links", l));
    }
    if let Some(p) = r.links_printed_order {
        let _ = writeln!(s, "links (printed bound): order {p}");
    }
    if let Some(o) = &r.oracle {
        let _ = writeln!(s, "{}", orders_line("oracle", o));
        for d in &o.faces {
            if let Some(x) = &d.depth {
                let _ = writeln!(
                    s,
                    "  {} codim {}: depth {} pd {} on {} variables (local cohomology depth {})",
                    d.face, d.rank, x.depth, x.pd, x.variables, x.lc_depth
                );
            }
        }
    }
    if let Some(fr) = &r.face_ring {
        let gens: Vec<String> = fr
            .generators
            .iter()
            .map(|g| format!("{} (deg {})", g.name, g.degree))
            .collect();
        let _ = writeln!(s, "face ring generators: {}", gens.join(", "));
        for rel in &fr.relations {
            let _ = writeln!(s, "  {rel}");
        }
    }
    if let Some(e) = &r.e2 {
        let _ = writeln!(s, "E2 (top face):");
        for (p, g) in e.table.iter().enumerate() {
            let _ = writeln!(s, "  p={p}: {}", dims_line(g));
        }
        let _ = writeln!(s, "  degenerate: {}", e.degenerate);
        if let Some(h) = &e.hc {
            let _ = writeln!(s, "  H_c(X/T): {}", dims_line(h));
        }
        if let (Some(b), Some(h)) = (e.bound, e.bound_holds) {
            let _ = writeln!(s, "  vanishing above degree {b}: {h}");
        }
    }
    if let Some(t) = &r.torus_manifold {
        let _ = writeln!(
            s,
            "acyclicity tests: torsion-free {} free {} consistent {}",
            t.torsion_free_test, t.free_test, t.consistent
        );
    }
    if let Some(d) = &r.dichotomy {
        let _ = writeln!(s, "compact dichotomy: {} ({})", d.holds, d.detail);
    }
    if let Some(ring) = &r.ring {
        let gens: Vec<String> = ring.ideal.iter().map(|g| format!("{g:?}")).collect();
        let _ = writeln!(s, "ideal generators: {}", gens.join(" "));
        for row in &ring.ext {
            let _ = writeln!(s, "  Ext^{}: {}", row.index, row.series);
        }
        match ring.depth_pd {
            Some((d, p)) => {
                let _ = writeln!(s, "depth {d} pd {p}");
            }
            None => {
                let _ = writeln!(s, "unit ideal: depth undefined");
            }
        }
        let _ = writeln!(
            s,
            "ext decomposition: {}",
            if ring.ext_decomposition.passed {
                "pass"
            } else {
                "FAIL"
            }
        );
        for m in &ring.ext_decomposition.mismatches {
            let _ = writeln!(s, "  {m}");
        }
    }
    if let Some(k) = &r.kernel {
        let _ = writeln!(s, "kernel dims: {}", dims_line(k));
    }
    for w in &r.warnings {
        let _ = writeln!(s, "warning: {w}");
    }
    let _ = writeln!(s, "agreement: {}", r.agreement);
    s
}

/// One corpus fan checked by every pipeline.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CrosscheckEntry {
    pub name: String,
    pub rank: usize,
    pub faces: usize,
    pub links: usize,
    pub links_printed: usize,
    pub oracle: usize,
    pub link_correspondence: bool,
    pub ext_decomposition: bool,
    /// `None` when the E2 page does not decide the vanishing.
    pub bredon: Option<bool>,
    /// Ext projective dimension plus local-cohomology depth equals the
    /// number of variables, for every link ring the oracle touched.
    pub auslander_buchsbaum: bool,
    pub dichotomy: Option<bool>,
}

impl CrosscheckEntry {
    pub fn orders_agree(&self) -> bool {
        self.faces == self.links && self.links == self.oracle
    }

    pub fn passed(&self) -> bool {
        self.orders_agree()
            && self.link_correspondence
            && self.ext_decomposition
            && self.bredon != Some(false)
            && self.auslander_buchsbaum
            && self.dichotomy != Some(false)
    }
}

pub fn crosscheck_fan(name: &str, fan: &Fan) -> Result<CrosscheckEntry, AnalyzeError> {
    let space = Space::Fan(fan.clone());
    let faces = syzygy_order_faces(&space)?.order;
    let oracle = syzygy_order_oracle(fan);
    let mut link_correspondence = true;
    for c in fan.cones() {
        link_correspondence &= link_correspondence_check(fan, c)?;
    }
    let auslander_buchsbaum = oracle
        .faces
        .iter()
        .filter_map(|d| d.depth.as_ref())
        .all(|x| x.pd + x.lc_depth == x.variables);
    let dichotomy = fan.is_complete_combinatorial().then(|| {
        compact_dichotomy_check(&space)
            .map(|d| d.holds)
            .unwrap_or(false)
    });
    Ok(CrosscheckEntry {
        name: name.to_string(),
        rank: fan.rank(),
        faces,
        links: syzygy_order_links(fan, LinkBound::Derived).order,
        links_printed: syzygy_order_links(fan, LinkBound::Printed).order,
        oracle: oracle.order,
        link_correspondence,
        ext_decomposition: ext_decomposition_check(fan.underlying_complex())?.passed,
        bredon: orbit_space_e2(&space, faces)?.bound_holds,
        auslander_buchsbaum,
        dichotomy,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fan::fixtures;
    use crate::generate::named;

    #[test]
    fn p1_report() {
        let r = analyze_fan(
            &fixtures::p1(),
            Options {
                oracle: true,
                max_degree: 20,
            },
        )
        .unwrap();
        assert_eq!(r.order, Some(1));
        assert!(r.agreement);
        let text = render_text(&r);
        assert!(text.contains("t_0 * t_1 = 0"), "{text}");
    }

    #[test]
    fn mutant_report() {
        let r = analyze_facestruct(&named::mutant(), Options::default()).unwrap();
        assert_eq!(r.order, Some(1));
    }

    #[test]
    fn complex_report() {
        let k = SimplicialComplex::new(4, vec![vec![0, 1], vec![2, 3]]).unwrap();
        let r = analyze_complex(
            &k,
            Options {
                oracle: true,
                max_degree: 20,
            },
        )
        .unwrap();
        assert_eq!(r.order, Some(0));
        assert_eq!(r.ring.as_ref().unwrap().depth_pd, Some((1, 3)));
        assert!(r.agreement);
        let void = analyze_complex(&SimplicialComplex::void(2), Options::default()).unwrap();
        assert_eq!(void.ring.unwrap().depth_pd, None);
    }

    #[test]
    fn crosscheck_named() {
        for (name, f) in crate::corpus::named_fans() {
            let e = crosscheck_fan(&name, &f).unwrap();
            assert!(e.passed(), "{e:?}");
        }
    }
}
