//! The CLI corpus: every subcommand on small inputs, plus failure cases.
#![allow(dead_code)]

#[path = "../../../core/tests/common/mod.rs"]
pub mod core;

use std::io::Write;
use std::process::{Command, Stdio};

use geofix::bundle::iterphi_bundle_iso;
use geofix::geosym::irreducible_catalog;
use geofix::gset::biset_iso_classes;
use geofix::wreath::{enumerate_wreath_homs, Wreath};
use geofix::group::named;
use geofix::{Caps, Perm, Subgroup};
use serde_json::{json, Value};

pub struct Case {
    pub name: String,
    pub args: Vec<String>,
    pub stdin: Option<String>,
    pub env_caps: Option<String>,
    pub exit: i32,
}

pub struct Outcome {
    pub code: i32,
    pub stdout: Vec<u8>,
}

impl Outcome {
    pub fn json(&self) -> Value {
        serde_json::from_slice(&self.stdout).expect("output is JSON")
    }
}

pub fn run(case: &Case) -> Outcome {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_geofix"));
    cmd.args(&case.args).stdin(Stdio::piped()).stdout(Stdio::piped()).stderr(Stdio::null());
    cmd.env_remove("GEOFIX_CAPS");
    if let Some(c) = &case.env_caps {
        cmd.env("GEOFIX_CAPS", c);
    }
    let mut child = cmd.spawn().expect("spawn geofix");
    {
        let mut sin = child.stdin.take().unwrap();
        if let Some(s) = &case.stdin {
            sin.write_all(s.as_bytes()).unwrap();
        }
    }
    let out = child.wait_with_output().unwrap();
    Outcome { code: out.status.code().unwrap_or(-1), stdout: out.stdout }
}

fn case(name: &str, args: &[&str], stdin: Option<Value>, exit: i32) -> Case {
    Case {
        name: name.to_string(),
        args: args.iter().map(|s| s.to_string()).collect(),
        stdin: stdin.map(|v| v.to_string()),
        env_caps: None,
        exit,
    }
}

pub fn fixture(name: &str) -> Value {
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/fixtures").join(name);
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn twisted_payload() -> Value {
    let caps = Caps::default();
    let (lam, q) = (named("C4").unwrap(), named("C2").unwrap());
    let x = biset_iso_classes(&lam, &q, 3, &caps).unwrap().into_iter().rfind(|x| x.size() == 3).unwrap();
    let homs = enumerate_wreath_homs(&lam, &Wreath::new(2, &q), &caps).unwrap();
    let sigma = homs.iter().find(|h| !h.is_irreducible() && h.a.iter().flatten().any(|&a| a != 0)).unwrap();
    json!({"lambda": "C4", "q": "C2", "x": x.spec(), "sigma": sigma.spec()})
}

/// A bundle over `C4` with `Q = C2` on which the iterated comparison for
/// `1 ≤ C2 ≤ C4` is defined.
fn bundle_payload() -> Value {
    let caps = Caps::default();
    let (gamma, q) = (named("C4").unwrap(), named("C2").unwrap());
    let c4 = Perm::from_cycles(4, &[&[0, 1, 2, 3]]).unwrap();
    let c2 = c4.compose(&c4);
    let sub = |gens: &[Perm]| Subgroup::from_perms(&gamma, gens).unwrap();
    let (k, lam, m) = (sub(&[]), sub(std::slice::from_ref(&c2)), sub(std::slice::from_ref(&c4)));
    let b = core::bundles::bundle_family(&gamma, &q, 2, 2, &caps)
        .into_iter().rfind(|b| b.base().size() == 2 && iterphi_bundle_iso(b, &k, &lam, &m, &caps).is_ok())
        .unwrap();
    json!({
        "gamma": "C4",
        "q": "C2",
        "bundle": b.spec(&caps).unwrap(),
        "lambda": [c2],
        "k": [],
        "m": [c4],
        "other": b.spec(&caps).unwrap(),
    })
}

fn geosym_payload() -> Value {
    let caps = Caps::default();
    let (lam, q) = (named("C2").unwrap(), named("C2").unwrap());
    let cat = irreducible_catalog(&lam, &q, &caps).unwrap();
    let n: Vec<usize> = (0..cat.classes.len()).map(|i| usize::from(i < 2)).collect();
    json!({"lambda": "C2", "q": "C2", "sigma": cat.tau(&n).unwrap().spec()})
}

fn acyc_payload(name: &str) -> Value {
    let e = core::acyc_suite().into_iter().find(|e| e.name == name).unwrap();
    serde_json::to_value(&e.data).unwrap()
}

/// The full corpus, in a fixed order.
pub fn corpus() -> Vec<Case> {
    let tw = twisted_payload();
    let bu = bundle_payload();
    let gs = geosym_payload();
    let std_acyc = acyc_payload("standard");
    let c3 = acyc_payload("c3");
    let mut out = vec![
        case("group subgroups", &["group", "subgroups", "--group", "S3"], None, 0),
        case("group classes", &["group", "classes", "--group", "S3"], None, 0),
        case("group weyl", &["group", "weyl", "--group", "S3", "--subgroup", "[[1,0,2]]"], None, 0),
        case("group homs", &["group", "homs", "--source", "C2", "--target", "S3"], None, 0),
        case("group inline spec", &["group", "classes", "--group", r#"{"degree":4,"generators":[[1,2,3,0]]}"#], None, 0),
        case("twisted decompose", &["twisted", "decompose"], Some(tw.clone()), 0),
        case("twisted fix-dim", &["twisted", "fix-dim", "--verify"], Some(tw.clone()), 0),
        case("twisted basis", &["--format", "compact", "twisted", "basis"], Some(tw.clone()), 0),
        case("bundle check-faithful", &["bundle", "check-faithful"], Some(bu.clone()), 0),
        case("bundle product", &["bundle", "product"], Some(bu.clone()), 0),
        case("bundle sym", &["bundle", "sym", "--power", "2"], Some(bu.clone()), 0),
        case("bundle eta-lambda", &["bundle", "eta-lambda"], Some(bu.clone()), 0),
        case("bundle eta-lambda-rel", &["bundle", "eta-lambda-rel"], Some(bu.clone()), 0),
        case("bundle iterphi", &["bundle", "iterphi"], Some(bu.clone()), 0),
        case("bundle ifcrit", &["bundle", "ifcrit"], Some(bu.clone()), 0),
        case("acyc validate", &["acyc", "validate"], Some(std_acyc.clone()), 0),
        case("acyc member", &["acyc", "member"], Some(std_acyc.clone()), 0),
        case("acyc member p", &["acyc", "member", "--p", "2"], Some(c3.clone()), 0),
        case("acyc stretch", &["acyc", "stretch", "--k", "3"], Some(std_acyc.clone()), 0),
        case("acyc phi", &["acyc", "phi", "--k", "2"], Some(std_acyc.clone()), 0),
        case("acyc sym", &["acyc", "sym", "--k", "2"], Some(std_acyc.clone()), 0),
        case("acyc free", &["acyc", "free"], Some(std_acyc.clone()), 0),
        case("acyc catalog", &["acyc", "catalog"], Some(c3.clone()), 0),
        case("acyc shadow", &["acyc", "shadow", "--k", "2"], Some(std_acyc.clone()), 0),
        case("acyc smash", &["acyc", "smash"], Some(json!({"a": std_acyc, "b": c3})), 0),
        case("geosym catalog", &["geosym", "catalog"], Some(gs.clone()), 0),
        case("geosym classify", &["geosym", "classify"], Some(gs.clone()), 0),
        case("geosym centralizer", &["geosym", "centralizer"], Some(gs.clone()), 0),
        case("geosym identity", &["geosym", "identity", "--q", "3"], Some(gs.clone()), 0),
        case("tomdieck classes", &["tomdieck", "classes", "--group", "S3", "--q", "3"], None, 0),
        case("tomdieck aut", &["tomdieck", "aut", "--group", "C2", "--z", r#"{"points":3,"action":[[1,0,2]]}"#], None, 0),
        case("tomdieck catalog C2", &["tomdieck", "catalog", "--group", "C2", "--m", "1", "--qmax", "2"], None, 0),
        case("tomdieck catalog S3", &["tomdieck", "catalog", "--group", "S3", "--m", "1", "--qmax", "2"], None, 0),
        case("bad payload type", &["acyc", "validate"], Some(json!({"n": "two"})), 2),
        case("bad permutation", &["twisted", "fix-dim"], Some(json!({"lambda": "C2", "q": "C2", "x": {"points": 2, "left": [[0, 0]]}, "sigma": {"q": 1, "s": [[0]], "a": [[[0, 1]]]}})), 2),
        case("invalid tuple", &["acyc", "validate"], Some(json!({"n": 2, "q": [0, 2], "m": [3], "l": [1], "v": [{"order": 2, "generator": [1, 0]}], "q_generators": []})), 2),
        case("unknown group", &["group", "classes", "--group", "X9"], None, 2),
        case("cap flag", &["tomdieck", "classes", "--group", "S4", "--q", "2", "--cap-group-order", "12"], None, 3),
    ];
    let mut env = case("cap env", &["group", "subgroups", "--group", "C8"], None, 3);
    env.env_caps = Some(r#"{"group_order": 4}"#.to_string());
    out.push(env);
    out
}
