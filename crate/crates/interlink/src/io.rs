//! JSON documents for instances, synthesis reports, link lists and verdicts.
//!
//! Every index on the wire is 1-based. A state is written `[subsystem, state]`
//! and an interconnection `[[target], [source]]`. Instance stars in `b` use
//! composite row numbers, `n_s * (subsystem - 1) + state`.
//!
//! ```json
//! {"version": "1", "n_s": 2, "k": 2, "m": 1, "a_s": [[2, 1]], "b": [[1, 1]]}
//! ```

use std::fmt;

use interlink_core::{
    CompositeSpec, Interconnection, RewireTrace, RightNode, SparsityPattern, StateId,
    SubsystemTemplate, SwapRecord, SynthesisReport, Verdict,
};
use serde::{Deserialize, Serialize};

pub const FORMAT_VERSION: &str = "1";

#[derive(Debug)]
pub enum DocumentError {
    Syntax(serde_json::Error),
    UnsupportedVersion(String),
    Invalid(interlink_core::Error),
}

impl fmt::Display for DocumentError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Syntax(e) => write!(f, "malformed document: {e}"),
            Self::UnsupportedVersion(v) => {
                write!(f, "unsupported document version {v:?} (expected \"{FORMAT_VERSION}\")")
            }
            Self::Invalid(e) => write!(f, "invalid document: {e}"),
        }
    }
}

impl std::error::Error for DocumentError {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            Self::Syntax(e) => Some(e),
            Self::Invalid(e) => Some(e),
            Self::UnsupportedVersion(_) => None,
        }
    }
}

impl From<serde_json::Error> for DocumentError {
    fn from(e: serde_json::Error) -> Self {
        Self::Syntax(e)
    }
}

impl From<interlink_core::Error> for DocumentError {
    fn from(e: interlink_core::Error) -> Self {
        Self::Invalid(e)
    }
}

/// `"1"` or `1`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
enum Version {
    Text(String),
    Number(u64),
}

impl Version {
    fn current() -> Self {
        Self::Text(FORMAT_VERSION.to_owned())
    }

    fn check(&self) -> Result<(), DocumentError> {
        match self {
            Self::Text(t) if t == FORMAT_VERSION => Ok(()),
            Self::Number(1) => Ok(()),
            Self::Text(t) => Err(DocumentError::UnsupportedVersion(t.clone())),
            Self::Number(n) => Err(DocumentError::UnsupportedVersion(n.to_string())),
        }
    }
}

type Pair = [usize; 2];
type LinkDoc = [Pair; 2];

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceDoc {
    version: Version,
    n_s: usize,
    k: usize,
    m: usize,
    a_s: Vec<Pair>,
    b: Vec<Pair>,
}

/// A parsed instance and any non-fatal findings (duplicate stars).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedInstance {
    pub spec: CompositeSpec,
    pub warnings: Vec<String>,
}

fn pattern(
    name: &str,
    n_rows: usize,
    n_cols: usize,
    stars: &[Pair],
    warnings: &mut Vec<String>,
) -> Result<SparsityPattern, DocumentError> {
    let mut p = SparsityPattern::new(n_rows, n_cols)?;
    for &[r, c] in stars {
        if !p.insert(r, c)? {
            warnings.push(format!("duplicate star [{r}, {c}] in {name} ignored"));
        }
    }
    Ok(p)
}

pub fn parse_instance_with_warnings(text: &str) -> Result<ParsedInstance, DocumentError> {
    let doc: InstanceDoc = serde_json::from_str(text)?;
    doc.version.check()?;
    let mut warnings = Vec::new();
    let a = pattern("a_s", doc.n_s, doc.n_s, &doc.a_s, &mut warnings)?;
    let n_t = doc.k.checked_mul(doc.n_s).ok_or(interlink_core::Error::ZeroDimension("k * n_s"))?;
    let b = pattern("b", n_t, doc.m, &doc.b, &mut warnings)?;
    let spec = CompositeSpec::new(doc.k, SubsystemTemplate::new(a)?, b)?;
    Ok(ParsedInstance { spec, warnings })
}

pub fn parse_instance(text: &str) -> Result<CompositeSpec, DocumentError> {
    parse_instance_with_warnings(text).map(|p| p.spec)
}

fn stars(p: &SparsityPattern) -> Vec<Pair> {
    p.stars().map(|(r, c)| [r, c]).collect()
}

pub fn emit_instance(spec: &CompositeSpec) -> String {
    let doc = InstanceDoc {
        version: Version::current(),
        n_s: spec.n_s(),
        k: spec.k(),
        m: spec.m(),
        a_s: stars(spec.a_s()),
        b: stars(spec.b()),
    };
    to_text(&doc)
}

/// One top-level field per line, values compact.
fn to_text<T: Serialize>(doc: &T) -> String {
    let value = serde_json::to_value(doc).expect("documents always serialize");
    let compact = |v: &serde_json::Value| serde_json::to_string(v).expect("values always serialize");
    match value {
        serde_json::Value::Object(fields) if !fields.is_empty() => {
            let body: Vec<String> = fields
                .iter()
                .map(|(k, v)| format!("  {}: {}", compact(&k.as_str().into()), compact(v)))
                .collect();
            format!("{{\n{}\n}}\n", body.join(",\n"))
        }
        other => format!("{}\n", compact(&other)),
    }
}

fn pair(s: StateId) -> Pair {
    [s.subsystem, s.state]
}

fn state([subsystem, state]: Pair) -> StateId {
    StateId::new(subsystem, state)
}

fn link_doc(x: &Interconnection) -> LinkDoc {
    [pair(x.target), pair(x.source)]
}

fn link([target, source]: LinkDoc) -> Result<Interconnection, DocumentError> {
    Ok(Interconnection::new(state(target), state(source))?)
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
enum RightDoc {
    State(Pair),
    Input(usize),
    Scc(usize),
}

impl From<RightNode> for RightDoc {
    fn from(r: RightNode) -> Self {
        match r {
            RightNode::State(s) => Self::State(pair(s)),
            RightNode::Input(c) => Self::Input(c),
            RightNode::Scc(h) => Self::Scc(h),
        }
    }
}

impl From<RightDoc> for RightNode {
    fn from(r: RightDoc) -> Self {
        match r {
            RightDoc::State(p) => Self::State(state(p)),
            RightDoc::Input(c) => Self::Input(c),
            RightDoc::Scc(h) => Self::Scc(h),
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MatchDoc {
    left: Pair,
    right: RightDoc,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SwapDoc {
    broken: [Pair; 2],
    made: [Pair; 2],
    newly_accessible_sccs: Vec<usize>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ReportDoc {
    version: Version,
    feasible: bool,
    controllable: bool,
    q: usize,
    alpha: usize,
    beta: usize,
    deficiency: usize,
    lower_bound: usize,
    interconnections: Vec<LinkDoc>,
    matching_witness: Vec<MatchDoc>,
    rewire_swaps: Vec<SwapDoc>,
}

/// Report document with a stable field order and sorted interconnections.
pub fn emit_report(report: &SynthesisReport) -> String {
    let mut links: Vec<LinkDoc> = report.interconnections.iter().map(link_doc).collect();
    links.sort();
    let doc = ReportDoc {
        version: Version::current(),
        feasible: report.feasible,
        controllable: report.controllable,
        q: report.q,
        alpha: report.alpha,
        beta: report.beta,
        deficiency: report.deficiency,
        lower_bound: report.lower_bound,
        interconnections: links,
        matching_witness: report
            .matching_witness
            .iter()
            .map(|&(l, r)| MatchDoc { left: pair(l), right: r.into() })
            .collect(),
        rewire_swaps: report
            .trace
            .swaps
            .iter()
            .map(|s| SwapDoc {
                broken: [pair(s.broken.0), pair(s.broken.1)],
                made: [pair(s.made.0), pair(s.made.1)],
                newly_accessible_sccs: s.newly_accessible_sccs.clone(),
            })
            .collect(),
    };
    to_text(&doc)
}

pub fn parse_report(text: &str) -> Result<SynthesisReport, DocumentError> {
    let doc: ReportDoc = serde_json::from_str(text)?;
    doc.version.check()?;
    Ok(SynthesisReport {
        feasible: doc.feasible,
        controllable: doc.controllable,
        q: doc.q,
        alpha: doc.alpha,
        beta: doc.beta,
        deficiency: doc.deficiency,
        lower_bound: doc.lower_bound,
        interconnections: doc.interconnections.into_iter().map(link).collect::<Result<_, _>>()?,
        matching_witness: doc
            .matching_witness
            .into_iter()
            .map(|m| (state(m.left), m.right.into()))
            .collect(),
        trace: RewireTrace {
            swaps: doc
                .rewire_swaps
                .into_iter()
                .map(|s| SwapRecord {
                    broken: (state(s.broken[0]), state(s.broken[1])),
                    made: (state(s.made[0]), state(s.made[1])),
                    newly_accessible_sccs: s.newly_accessible_sccs,
                })
                .collect(),
        },
    })
}

/// Accepts either a report document or a bare list of `[[target], [source]]`.
pub fn parse_links(text: &str) -> Result<Vec<Interconnection>, DocumentError> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum LinksDoc {
        List(Vec<LinkDoc>),
        Report { interconnections: Vec<LinkDoc> },
    }
    let links = match serde_json::from_str(text)? {
        LinksDoc::List(l) | LinksDoc::Report { interconnections: l } => l,
    };
    links.into_iter().map(link).collect()
}

pub fn emit_links(links: &[Interconnection]) -> String {
    let docs: Vec<LinkDoc> = links.iter().map(link_doc).collect();
    to_text(&docs)
}

#[derive(Serialize)]
struct VerdictDoc {
    version: Version,
    controllable: bool,
    inaccessible_states: Vec<Pair>,
    dilation_deficiency: usize,
    matching_witness: Vec<MatchDoc>,
}

/// Verdict on a composite with `n_s` states per subsystem; global indices
/// are written back as `[subsystem, state]`.
pub fn emit_verdict(v: &Verdict, n_s: usize) -> String {
    let to_pair = |g: usize| pair(StateId::from_global(g, n_s));
    let doc = VerdictDoc {
        version: Version::current(),
        controllable: v.controllable,
        inaccessible_states: v.inaccessible_states.iter().map(|&g| to_pair(g)).collect(),
        dilation_deficiency: v.dilation_deficiency,
        matching_witness: v
            .matching_witness
            .pairs()
            .map(|(l, r)| MatchDoc {
                left: to_pair(l.state),
                right: match r {
                    RightNode::State(s) => RightDoc::State(to_pair(s.state)),
                    other => other.into(),
                },
            })
            .collect(),
    };
    to_text(&doc)
}

#[derive(Serialize)]
struct ComponentDoc {
    states: Vec<usize>,
    source: bool,
}

#[derive(Serialize)]
struct AnalysisDoc {
    version: Version,
    n_t: usize,
    q: usize,
    deficiency: usize,
    lower_bound: usize,
    template_components: Vec<ComponentDoc>,
    inaccessible_components: Vec<Vec<Pair>>,
}

/// Summary of an instance before synthesis: the template's strongly
/// connected components (flagging those with no incoming arcs), the
/// inaccessible source components of the composite, and the lower bound.
pub fn emit_analysis(spec: &CompositeSpec) -> String {
    let template = interlink_core::LayeredDigraph::from_system(
        spec.a_s(),
        &SparsityPattern::new(spec.n_s(), 1).expect("n_s is positive"),
    )
    .expect("template is square");
    let sccs = interlink_core::strongly_connected_components(&template);
    let nset = interlink_core::inaccessible_nontop_sccs(spec);
    let doc = AnalysisDoc {
        version: Version::current(),
        n_t: spec.n_t(),
        q: nset.q(),
        deficiency: interlink_core::verify::intra_input_deficiency(spec),
        lower_bound: interlink_core::lower_bound(spec),
        template_components: sccs
            .components
            .iter()
            .zip(&sccs.non_top_linked)
            .map(|(c, &source)| ComponentDoc {
                states: c.iter().map(|s| s.state).collect(),
                source,
            })
            .collect(),
        inaccessible_components: nset
            .sccs
            .iter()
            .map(|c| c.iter().copied().map(pair).collect())
            .collect(),
    };
    to_text(&doc)
}

#[derive(Serialize)]
struct OracleDoc {
    version: Version,
    cap: usize,
    minimum: Option<usize>,
    witness: Vec<LinkDoc>,
}

pub fn emit_oracle(cap: usize, result: Option<&(usize, Vec<Interconnection>)>) -> String {
    let doc = OracleDoc {
        version: Version::current(),
        cap,
        minimum: result.map(|r| r.0),
        witness: result.map_or_else(Vec::new, |r| r.1.iter().map(link_doc).collect()),
    };
    to_text(&doc)
}
