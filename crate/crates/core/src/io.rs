//! JSON documents for instances, allocations and cut-budget certificates.
//!
//! Every rational travels as a string (`"p/q"` or an integer). Output is
//! canonical: fields in a fixed order, agents and pieces by index, so equal
//! values serialize to identical bytes.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::bounds::{CertificateStatus, CutBudgetCertificate};
use crate::error::{Error, Result};
use crate::model::{Allocation, Instance, Interval, Region, Topology, Valuation};
use crate::rational::{format_rational, parse_rational};
use crate::Rational;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceDoc {
    #[serde(default)]
    topology: Option<String>,
    agents: Vec<AgentDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AgentDoc {
    #[serde(default)]
    name: Option<String>,
    breakpoints: Vec<String>,
    densities: Vec<String>,
    entitlement: String,
}

/// A piece is a list of `[lo, hi]` pairs.
type PieceDoc = Vec<[String; 2]>;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AllocationDoc {
    /// `[agent-index, intervals]`, agent indices counted from 0.
    pieces: Vec<(usize, PieceDoc)>,
    #[serde(default)]
    cuts: Option<Vec<String>>,
    #[serde(default)]
    algorithm: Option<String>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CertificateDoc {
    k: usize,
    status: String,
    allocation: Option<AllocationDoc>,
    systems_examined: u64,
}

fn json_error(e: serde_json::Error) -> Error {
    Error::Parse(format!("malformed JSON: {e}"))
}

fn parse_all(values: &[String], what: &str) -> Result<Vec<Rational>> {
    values
        .iter()
        .map(|s| parse_rational(s).map_err(|e| Error::Parse(format!("{what}: {e}"))))
        .collect()
}

fn fmt_all(values: &[Rational]) -> Vec<String> {
    values.iter().map(format_rational).collect()
}

fn piece_doc(r: &Region) -> PieceDoc {
    r.intervals()
        .iter()
        .map(|iv| [format_rational(iv.lo()), format_rational(iv.hi())])
        .collect()
}

fn piece_from_doc(doc: &PieceDoc, index: usize) -> Result<Region> {
    let intervals = doc
        .iter()
        .map(|[lo, hi]| {
            let what = format!("piece {}", index + 1);
            let lo = parse_rational(lo).map_err(|e| Error::Parse(format!("{what}: {e}")))?;
            let hi = parse_rational(hi).map_err(|e| Error::Parse(format!("{what}: {e}")))?;
            Interval::new(lo, hi)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Region::new(intervals))
}

fn to_pretty<T: Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents serialize");
    s.push('\n');
    s
}

pub fn parse_instance(text: &str) -> Result<Instance> {
    let doc: InstanceDoc = serde_json::from_str(text).map_err(json_error)?;
    let topology = match &doc.topology {
        Some(t) => t.parse::<Topology>()?,
        None => Topology::Interval,
    };
    let mut names = Vec::with_capacity(doc.agents.len());
    let mut valuations = Vec::with_capacity(doc.agents.len());
    let mut entitlements = Vec::with_capacity(doc.agents.len());
    for (i, a) in doc.agents.iter().enumerate() {
        let what = format!("agent {}", i + 1);
        names.push(a.name.clone().unwrap_or_else(|| format!("agent-{}", i + 1)));
        entitlements
            .push(parse_rational(&a.entitlement).map_err(|e| Error::Parse(format!("{what} entitlement: {e}")))?);
        let bps = parse_all(&a.breakpoints, &format!("{what} breakpoints"))?;
        let ds = parse_all(&a.densities, &format!("{what} densities"))?;
        valuations.push(Valuation::new(bps, ds).map_err(|e| match e {
            Error::InvalidValuation(m) => Error::InvalidValuation(format!("{what}: {m}")),
            other => other,
        })?);
    }
    Instance::with_names(topology, names, valuations, entitlements)
}

pub fn instance_to_json(inst: &Instance) -> String {
    to_pretty(&instance_doc(inst))
}

fn instance_doc(inst: &Instance) -> InstanceDoc {
    InstanceDoc {
        topology: Some(inst.topology().as_str().to_string()),
        agents: (0..inst.agent_count())
            .map(|i| AgentDoc {
                name: Some(inst.names()[i].clone()),
                breakpoints: fmt_all(inst.valuations()[i].breakpoints()),
                densities: fmt_all(inst.valuations()[i].densities()),
                entitlement: format_rational(&inst.entitlements()[i]),
            })
            .collect(),
    }
}

/// SHA-256 hex digest of the compact canonical instance document.
pub fn instance_digest(inst: &Instance) -> String {
    let compact = serde_json::to_string(&instance_doc(inst)).expect("documents serialize");
    hex::encode(Sha256::digest(compact.as_bytes()))
}

/// An allocation read from disk; `algorithm` and `cuts` are informational.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AllocationFile {
    pub allocation: Allocation,
    pub algorithm: Option<String>,
    pub cuts: Option<Vec<Rational>>,
}

pub fn parse_allocation(text: &str) -> Result<AllocationFile> {
    let doc: AllocationDoc = serde_json::from_str(text).map_err(json_error)?;
    allocation_from_doc(doc)
}

fn allocation_from_doc(doc: AllocationDoc) -> Result<AllocationFile> {
    let len = doc.pieces.iter().map(|(i, _)| i + 1).max().unwrap_or(0);
    let mut pieces: Vec<Option<Region>> = vec![None; len];
    for (agent, piece) in &doc.pieces {
        if pieces[*agent].is_some() {
            return Err(Error::Parse(format!("agent index {agent} listed twice")));
        }
        pieces[*agent] = Some(piece_from_doc(piece, *agent)?);
    }
    let pieces = pieces.into_iter().map(|p| p.unwrap_or_else(Region::empty)).collect();
    let cuts = doc.cuts.as_deref().map(|c| parse_all(c, "cuts")).transpose()?;
    Ok(AllocationFile {
        allocation: Allocation::new(pieces),
        algorithm: doc.algorithm,
        cuts,
    })
}

fn allocation_doc(a: &Allocation, cuts: &[Rational], algorithm: Option<&str>) -> AllocationDoc {
    AllocationDoc {
        pieces: a.pieces().iter().map(piece_doc).enumerate().collect(),
        cuts: Some(fmt_all(cuts)),
        algorithm: algorithm.map(str::to_string),
    }
}

pub fn allocation_to_json(a: &Allocation, cuts: &[Rational], algorithm: Option<&str>) -> String {
    to_pretty(&allocation_doc(a, cuts, algorithm))
}

/// Certificate document for an instance of the given topology. The embedded
/// allocation lists its cuts on that topology.
pub fn certificate_to_json(c: &CutBudgetCertificate, topology: Topology) -> String {
    let (status, allocation) = match &c.status {
        CertificateStatus::Feasible(a) => (
            "feasible",
            Some(allocation_doc(a, &a.cut_points_on(topology), Some("oracle"))),
        ),
        CertificateStatus::Infeasible => ("infeasible", None),
    };
    to_pretty(&CertificateDoc {
        k: c.k,
        status: status.to_string(),
        allocation,
        systems_examined: c.systems_examined,
    })
}

/// Reads a certificate document back; `instance_digest` is not part of the
/// file and is supplied by the caller.
pub fn parse_certificate(text: &str, instance_digest: String) -> Result<CutBudgetCertificate> {
    let doc: CertificateDoc = serde_json::from_str(text).map_err(json_error)?;
    let status = match (doc.status.as_str(), doc.allocation) {
        ("feasible", Some(a)) => CertificateStatus::Feasible(allocation_from_doc(a)?.allocation),
        ("infeasible", None) => CertificateStatus::Infeasible,
        (s, _) => return Err(Error::Parse(format!("inconsistent certificate status {s:?}"))),
    };
    Ok(CutBudgetCertificate {
        instance_digest,
        k: doc.k,
        status,
        systems_examined: doc.systems_examined,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    const SAMPLE: &str = r#"{
      "agents": [
        {"entitlement": "1/3", "breakpoints": ["0", "1/2", "1"], "densities": ["2", "0"]},
        {"name": "bob", "entitlement": "2/3", "breakpoints": ["0", "1"], "densities": ["1"]}
      ]
    }"#;

    #[test]
    fn instance_round_trip() {
        let inst = parse_instance(SAMPLE).unwrap();
        assert_eq!(inst.names(), &["agent-1".to_string(), "bob".to_string()]);
        assert_eq!(inst.entitlements()[0], ratio(1, 3));
        let text = instance_to_json(&inst);
        assert_eq!(parse_instance(&text).unwrap(), inst);
        assert_eq!(instance_to_json(&parse_instance(&text).unwrap()), text);
        assert_eq!(instance_digest(&inst).len(), 64);
    }

    #[test]
    fn rejects_floats_and_bad_sums() {
        let float = SAMPLE.replace("\"1/3\"", "\"0.333\"");
        assert!(matches!(parse_instance(&float), Err(Error::Parse(_))));
        let bad = SAMPLE.replace("\"1/3\"", "\"1/2\"");
        assert!(matches!(parse_instance(&bad), Err(Error::InvalidInstance(_))));
        assert!(parse_instance("{").is_err());
    }

    #[test]
    fn allocation_round_trip() {
        let a = Allocation::new(vec![
            Region::interval(ratio(0, 1), ratio(1, 4)).unwrap(),
            Region::interval(ratio(1, 4), ratio(1, 1)).unwrap(),
        ]);
        let text = allocation_to_json(&a, &a.cut_points(), Some("recursive"));
        let back = parse_allocation(&text).unwrap();
        assert_eq!(back.allocation, a);
        assert_eq!(back.cuts, Some(vec![ratio(1, 4)]));
        assert_eq!(back.algorithm.as_deref(), Some("recursive"));
        assert!(text.contains("\"pieces\": [\n    [\n      0,"));
    }

    #[test]
    fn sparse_and_duplicate_agent_indices() {
        let sparse = r#"{"pieces": [[1, [["0", "1"]]]]}"#;
        let back = parse_allocation(sparse).unwrap();
        assert_eq!(back.allocation.pieces(), &[Region::empty(), Region::full()]);
        let dup = r#"{"pieces": [[0, []], [0, []]]}"#;
        assert!(parse_allocation(dup).is_err());
        assert!(parse_allocation(r#"{"pieces": [[0, [["1/2", "1/4"]]]]}"#).is_err());
    }

    #[test]
    fn certificate_round_trip() {
        let c = CutBudgetCertificate {
            instance_digest: "ab".into(),
            k: 2,
            status: CertificateStatus::Infeasible,
            systems_examined: 7,
        };
        let text = certificate_to_json(&c, Topology::Interval);
        assert!(text.contains("\"allocation\": null"));
        assert_eq!(parse_certificate(&text, "ab".into()).unwrap(), c);
        let a = Allocation::new(vec![Region::full(), Region::empty()]);
        let f = CutBudgetCertificate {
            status: CertificateStatus::Feasible(a),
            ..c
        };
        let text = certificate_to_json(&f, Topology::Interval);
        assert_eq!(parse_certificate(&text, "ab".into()).unwrap(), f);
    }
}
