use std::fmt::Write as _;
use std::time::Instant;

use biregular::excess::{ExplicitFormulae, LocalExcess};
use biregular::oracle::{is_distance_biregular, IntersectionArray};
use biregular::{Analysis, CaseTag, Config, ExcessError, Graph, GraphError, SpectraError, Verdict};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphInfo {
    pub source: String,
    pub n: usize,
    pub edges: usize,
    pub n1: usize,
    pub n2: usize,
    pub delta1: Option<usize>,
    pub delta2: Option<usize>,
    pub d1: usize,
    pub d2: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumInfo {
    pub distinct: Vec<f64>,
    pub multiplicities: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleInfo {
    pub distance_biregular: bool,
    pub side1_array: Option<IntersectionArray>,
    pub side2_array: Option<IntersectionArray>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub grouping: f64,
    pub equality: f64,
    pub consistency: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub graph: GraphInfo,
    pub spectrum: SpectrumInfo,
    pub verdict: Verdict,
    pub explicit_formulae: Option<ExplicitFormulae>,
    pub oracle: OracleInfo,
    pub agreement: bool,
    pub distance_biregular: bool,
    pub case_c_variant: String,
    pub solver: String,
    pub tolerances: Tolerances,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub local_excess: Option<Vec<LocalExcess>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<f64>,
}

pub struct Options {
    pub config: Config,
    pub variant_label: String,
    pub local: bool,
    pub timing: bool,
}

pub fn build(g: &Graph, source: &str, opts: &Options) -> Result<Report, ExcessError> {
    let start = Instant::now();
    let analysis = Analysis::run(g, &opts.config)?;
    let verdict = analysis.verdict();
    let oracle = is_distance_biregular(g)?;
    let (mut a1, mut a2) = match oracle.arrays.clone() {
        Some((a1, a2)) => (Some(a1), Some(a2)),
        None => (None, None),
    };
    if verdict.sides_swapped {
        std::mem::swap(&mut a1, &mut a2);
    }
    let local_excess = if opts.local {
        Some(analysis.local_excess_all()?)
    } else {
        None
    };
    let sides = &analysis.weights.sides;
    let spectrum = analysis.spectrum();
    let elapsed = start.elapsed().as_secs_f64() * 1e3;
    Ok(Report {
        graph: GraphInfo {
            source: source.to_string(),
            n: g.order(),
            edges: g.edge_count(),
            n1: sides.n1(),
            n2: sides.n2(),
            delta1: sides.delta1,
            delta2: sides.delta2,
            d1: sides.d1,
            d2: sides.d2,
        },
        spectrum: SpectrumInfo {
            distinct: spectrum.distinct.clone(),
            multiplicities: spectrum.mult.clone(),
        },
        explicit_formulae: analysis.explicit_formulae(),
        agreement: verdict.distance_biregular_spectral == oracle.distance_biregular,
        distance_biregular: verdict.distance_biregular_spectral,
        oracle: OracleInfo {
            distance_biregular: oracle.distance_biregular,
            side1_array: a1,
            side2_array: a2,
        },
        verdict,
        case_c_variant: opts.variant_label.clone(),
        solver: opts.config.solver.clone(),
        tolerances: Tolerances {
            grouping: opts.config.grouping_tol,
            equality: opts.config.equality_tol,
            consistency: opts.config.consistency_tol,
        },
        local_excess,
        timing_ms: opts.timing.then_some(elapsed),
    })
}

/// A failed input or analysis, with a short kind for summaries.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub kind: String,
    pub message: String,
}

impl Failure {
    pub fn new(kind: &str, message: impl Into<String>) -> Failure {
        Failure {
            kind: kind.to_string(),
            message: message.into(),
        }
    }
}

impl From<GraphError> for Failure {
    fn from(e: GraphError) -> Failure {
        Failure::new(graph_error_kind(&e), e.to_string())
    }
}

impl From<ExcessError> for Failure {
    fn from(e: ExcessError) -> Failure {
        Failure::new(error_kind(&e), e.to_string())
    }
}

fn graph_error_kind(e: &GraphError) -> &'static str {
    match e {
        GraphError::NotBipartite { .. } => "NotBipartite",
        GraphError::Disconnected { .. } => "Disconnected",
        GraphError::Parse(_) => "ParseError",
        GraphError::UnknownFamily(_) => "UnknownFamily",
        GraphError::BadParams { .. } => "BadParams",
        _ => "InvalidGraph",
    }
}

pub fn error_kind(e: &ExcessError) -> &'static str {
    match e {
        ExcessError::Graph(g) | ExcessError::Spectra(SpectraError::Graph(g)) => graph_error_kind(g),
        ExcessError::Spectra(_) => "SpectralFailure",
        ExcessError::Ortho(_) | ExcessError::InconsistentWeights { .. } => "NumericalFailure",
        ExcessError::TooSmall => "TooSmall",
        ExcessError::WrongCase { .. } | ExcessError::DegreeTooHigh { .. } => "InternalError",
    }
}

fn fmt_array(a: &Option<IntersectionArray>) -> String {
    match a {
        Some(a) => {
            let (b, c) = a.bc();
            let join = |v: Vec<usize>| {
                v.iter()
                    .map(|x| x.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            };
            format!("{{{}; {}}}", join(b), join(c))
        }
        None => "-".to_string(),
    }
}

pub fn render_text(r: &Report) -> String {
    let mut s = String::new();
    let g = &r.graph;
    let v = &r.verdict;
    let opt = |x: Option<usize>| x.map_or("-".to_string(), |x| x.to_string());
    writeln!(s, "graph      {}", g.source).unwrap();
    writeln!(
        s,
        "order      n = {}, |E| = {}, n1 = {}, n2 = {}, delta = ({}, {}), D = ({}, {})",
        g.n,
        g.edges,
        g.n1,
        g.n2,
        opt(g.delta1),
        opt(g.delta2),
        g.d1,
        g.d2
    )
    .unwrap();
    let spec: Vec<String> = r
        .spectrum
        .distinct
        .iter()
        .zip(&r.spectrum.multiplicities)
        .map(|(l, m)| format!("{l:.6}^{m}"))
        .collect();
    writeln!(s, "spectrum   {}", spec.join(" ")).unwrap();
    let case = match v.case {
        CaseTag::I => "i (n1 = n2)",
        CaseTag::Ii => "ii (d odd)",
        CaseTag::Iii => "iii (d even, m(0) != |n1 - n2|)",
        CaseTag::Iv => "iv (d even, m(0) = |n1 - n2|)",
    };
    writeln!(s, "case       {case}, d = {}, m(0) = {}", v.d, v.m_zero).unwrap();
    writeln!(
        s,
        "semiregular {} (defect {:.3e})",
        v.semiregular, v.semiregularity_defect
    )
    .unwrap();
    for c in &v.conditions {
        writeln!(
            s,
            "condition  {:<30} average {:.12} target {:.12} gap {:+.3e} {}",
            c.label,
            c.average,
            c.target,
            c.gap,
            if c.pass { "ok" } else { "FAIL" }
        )
        .unwrap();
    }
    if let Some(cc) = &v.case_c {
        for (name, c) in [("literal", &cc.literal), ("derived", &cc.derived)] {
            writeln!(
                s,
                "variant    {name:<8} gap {:+.3e} {}",
                c.gap,
                if c.pass { "ok" } else { "FAIL" }
            )
            .unwrap();
        }
    }
    writeln!(
        s,
        "gap        {:.3e} (tolerance {:e})",
        v.condition_gap, v.equality_tol
    )
    .unwrap();
    writeln!(
        s,
        "oracle     {} side arrays {} {}",
        r.oracle.distance_biregular,
        fmt_array(&r.oracle.side1_array),
        fmt_array(&r.oracle.side2_array)
    )
    .unwrap();
    writeln!(
        s,
        "verdict    {}",
        if r.distance_biregular {
            "distance-biregular"
        } else {
            "not distance-biregular"
        }
    )
    .unwrap();
    s
}
