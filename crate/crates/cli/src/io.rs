//! Envelopes, payload decoding, cap resolution and exit codes.

use std::io::Read;
use std::path::Path;

use geofix::group::{named, GroupSpec};
use geofix::{Caps, FinGroup, Group, Perm, Subgroup};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const CAPS_ENV: &str = "GEOFIX_CAPS";

#[derive(Debug)]
pub enum Failure {
    Validation(Vec<String>),
    Cap(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Validation(_) => 2,
            Failure::Cap(_) => 3,
        }
    }

    pub fn diagnostics(&self) -> Vec<String> {
        match self {
            Failure::Validation(d) => d.clone(),
            Failure::Cap(d) => vec![d.clone()],
        }
    }

    pub fn invalid(msg: impl Into<String>) -> Failure {
        Failure::Validation(vec![msg.into()])
    }
}

impl From<geofix::Error> for Failure {
    fn from(e: geofix::Error) -> Failure {
        if e.is_cap() {
            Failure::Cap(e.to_string())
        } else {
            Failure::Validation(vec![e.to_string()])
        }
    }
}

pub type CliResult<T> = std::result::Result<T, Failure>;

#[derive(Serialize)]
pub struct Envelope {
    pub command: String,
    pub result: Value,
    pub diagnostics: Vec<String>,
    pub version: String,
}

impl Envelope {
    pub fn new(command: &str, result: Value, diagnostics: Vec<String>) -> Envelope {
        Envelope {
            command: command.to_string(),
            result,
            diagnostics,
            version: concat!("geofix ", env!("CARGO_PKG_VERSION")).to_string(),
        }
    }
}

/// Caps from the environment, then overridden by flags.
pub fn resolve_caps(env: Option<&str>, overrides: &[(&str, Option<usize>)]) -> CliResult<Caps> {
    let mut caps = match env {
        Some(s) if !s.trim().is_empty() => decode::<Caps>(s, CAPS_ENV)?,
        _ => Caps::default(),
    };
    for &(name, v) in overrides {
        let Some(v) = v else { continue };
        match name {
            "group-order" => caps.group_order = v,
            "hom-candidates" => caps.hom_candidates = v,
            "materialize" => caps.materialize = v,
            "brute-force-dim" => caps.brute_force_dim = v,
            "q-max" => caps.q_max = v,
            _ => unreachable!("unknown cap flag {name}"),
        }
    }
    Ok(caps)
}

fn pointer(path: &serde_path_to_error::Path) -> String {
    use serde_path_to_error::Segment;
    let mut out = String::new();
    for seg in path.iter() {
        out.push('/');
        match seg {
            Segment::Seq { index } => out.push_str(&index.to_string()),
            Segment::Map { key } => out.push_str(&key.replace('~', "~0").replace('/', "~1")),
            Segment::Enum { variant } => out.push_str(variant),
            Segment::Unknown => out.push('?'),
        }
    }
    out
}

/// Decodes JSON, reporting failures with a JSON pointer into the document.
pub fn decode<T: DeserializeOwned>(text: &str, what: &str) -> CliResult<T> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let p = pointer(e.path());
        let p = if p.is_empty() { "/".to_string() } else { p };
        Failure::invalid(format!("{what} at {p}: {}", e.inner()))
    })
}

pub fn read_payload<T: DeserializeOwned>(input: Option<&Path>) -> CliResult<T> {
    let text = match input {
        Some(p) => std::fs::read_to_string(p).map_err(|e| Failure::invalid(format!("cannot read {}: {e}", p.display())))?,
        None => {
            let mut s = String::new();
            std::io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| Failure::invalid(format!("cannot read stdin: {e}")))?;
            s
        }
    };
    decode(&text, "payload")
}

/// A group given by name (`S3`, `C4xC2`, ...) or by degree and generators.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupRef {
    Name(String),
    Spec(GroupSpec),
}

impl GroupRef {
    pub fn resolve(&self, caps: &Caps) -> CliResult<Group> {
        Ok(match self {
            GroupRef::Name(n) => named(n)?,
            GroupRef::Spec(s) => FinGroup::from_spec(s, caps.materialize)?,
        })
    }
}

/// Flag form of a group: a name, or inline JSON for a generator spec.
pub fn group_flag(s: &str, caps: &Caps) -> CliResult<Group> {
    if s.trim_start().starts_with('{') {
        GroupRef::Spec(decode(s, "group")?).resolve(caps)
    } else {
        GroupRef::Name(s.to_string()).resolve(caps)
    }
}

/// Subgroup generated by the given permutations.
pub fn subgroup(g: &Group, gens: &[Perm]) -> CliResult<Subgroup> {
    Ok(Subgroup::from_perms(g, gens)?)
}

pub fn members(h: &Subgroup) -> Vec<Perm> {
    h.members().iter().map(|&x| h.group().element(x).clone()).collect()
}

pub fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("results serialize to JSON")
}

pub fn render(env: &Envelope, pretty: bool) -> String {
    let mut s = if pretty {
        serde_json::to_string_pretty(env)
    } else {
        serde_json::to_string(env)
    }
    .expect("envelope serializes");
    s.push('\n');
    s
}
