//! JSON formats. Big integers are written as decimal strings.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::approx::ApproxCertificate;
use crate::error::{Error, Result};
use crate::exact::ExactResult;
use crate::gadgets::{PartitionWitness, Role, ThreePartitionInstance};
use crate::instance::{validate_instance, Allocation, HouseValues, Instance};

fn parse_err(e: impl std::fmt::Display) -> Error {
    Error::Parse(e.to_string())
}

/// A house value as written in input files: a JSON string holding an
/// integer, a fraction `p/q`, or a decimal `x.y`; or a plain JSON integer.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ValueToken {
    Text(String),
    Int(u64),
}

/// Exact non-negative rational `num/den`.
fn parse_rational(token: &ValueToken) -> Result<(BigUint, BigUint)> {
    let text = match token {
        ValueToken::Int(v) => return Ok((BigUint::from(*v), BigUint::one())),
        ValueToken::Text(s) => s.trim(),
    };
    let digits = |s: &str| -> Result<BigUint> {
        if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::Parse(format!("invalid value {text:?}")));
        }
        BigUint::parse_bytes(s.as_bytes(), 10).ok_or_else(|| Error::Parse(format!("invalid value {text:?}")))
    };
    if let Some((p, q)) = text.split_once('/') {
        let den = digits(q.trim())?;
        if den.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {text:?}")));
        }
        Ok((digits(p.trim())?, den))
    } else if let Some((int, frac)) = text.split_once('.') {
        let int = if int.is_empty() { "0" } else { int };
        if frac.len() > 4096 {
            return Err(Error::Parse("decimal fraction too long".into()));
        }
        let num = digits(&format!("{int}{frac}"))?;
        Ok((num, BigUint::from(10u8).pow(frac.len() as u32)))
    } else {
        Ok((digits(text)?, BigUint::one()))
    }
}

/// Parses value tokens, rescaling fractions by the least common multiple of
/// their denominators so every value becomes an integer. Order is kept.
pub fn parse_value_tokens(tokens: &[ValueToken]) -> Result<Vec<BigUint>> {
    let parsed: Vec<(BigUint, BigUint)> = tokens
        .iter()
        .map(|t| {
            let (num, den) = parse_rational(t)?;
            let g = num.gcd(&den);
            Ok(if g.is_zero() { (num, den) } else { (num / &g, den / g) })
        })
        .collect::<Result<_>>()?;
    let scale = parsed.iter().fold(BigUint::one(), |acc, (_, d)| acc.lcm(d));
    Ok(parsed.into_iter().map(|(num, den)| num * (&scale / den)).collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceJson {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
    pub values: Vec<ValueToken>,
}

pub fn parse_instance(text: &str) -> Result<Instance> {
    let raw: InstanceJson = serde_json::from_str(text).map_err(parse_err)?;
    if raw.values.len() != raw.n {
        return Err(Error::LengthMismatch { expected: raw.n, found: raw.values.len() });
    }
    let values = parse_value_tokens(&raw.values)?;
    validate_instance(raw.n, raw.edges.into_iter().map(|[u, v]| (u, v)).collect(), values)
}

pub fn instance_to_json(instance: &Instance) -> String {
    let raw = InstanceJson {
        n: instance.n(),
        edges: instance.graph().edges().iter().map(|&(u, v)| [u, v]).collect(),
        values: instance.houses().values().iter().map(|v| ValueToken::Text(v.to_str_radix(10))).collect(),
    };
    serde_json::to_string(&raw).expect("plain data serializes")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AllocationJson {
    pub assignment: Vec<usize>,
}

pub fn parse_allocation(text: &str) -> Result<Allocation> {
    let raw: AllocationJson = serde_json::from_str(text).map_err(parse_err)?;
    Allocation::new(raw.assignment)
}

pub fn allocation_to_json(alloc: &Allocation) -> String {
    serde_json::to_string(&AllocationJson { assignment: alloc.assignment().to_vec() }).expect("plain data serializes")
}

/// A bare array of values, or an object `{"values": [...]}`. Values must be
/// non-decreasing after rescaling.
pub fn parse_values(text: &str) -> Result<HouseValues> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Shape {
        Bare(Vec<ValueToken>),
        Wrapped { values: Vec<ValueToken> },
    }
    let tokens = match serde_json::from_str::<Shape>(text).map_err(parse_err)? {
        Shape::Bare(v) => v,
        Shape::Wrapped { values } => values,
    };
    HouseValues::new(parse_value_tokens(&tokens)?)
}

pub fn parse_three_partition(text: &str) -> Result<ThreePartitionInstance> {
    let tp: ThreePartitionInstance = serde_json::from_str(text).map_err(parse_err)?;
    tp.validate()?;
    Ok(tp)
}

pub fn parse_witness(text: &str) -> Result<PartitionWitness> {
    serde_json::from_str(text).map_err(parse_err)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactResultJson {
    pub optimal_envy: String,
    pub assignment: Vec<usize>,
    pub states_explored: u64,
}

pub fn exact_result_to_json(r: &ExactResult) -> String {
    serde_json::to_string(&ExactResultJson {
        optimal_envy: r.optimal_envy.to_str_radix(10),
        assignment: r.witness.assignment().to_vec(),
        states_explored: r.states_explored,
    })
    .expect("plain data serializes")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApproxJson {
    pub assignment: Vec<usize>,
    pub achieved_envy: String,
    pub bound_name: String,
    pub guarantee_bound: String,
}

pub fn approx_to_json(alloc: &Allocation, cert: &ApproxCertificate) -> String {
    serde_json::to_string(&ApproxJson {
        assignment: alloc.assignment().to_vec(),
        achieved_envy: cert.achieved_envy.to_str_radix(10),
        bound_name: cert.bound_name.to_string(),
        guarantee_bound: cert.guarantee_bound.to_str_radix(10),
    })
    .expect("plain data serializes")
}

pub fn roles_to_json(roles: &[Role]) -> String {
    serde_json::to_string(roles).expect("plain data serializes")
}
