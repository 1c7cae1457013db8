//! Dispatch from parsed subcommands to library operations.

use std::path::Path;

use geofix::acyc::{self, AcycData};
use geofix::bundle::{iterphi_bundle_iso, BundleData, BundleSpec};
use geofix::geosym::{centralizer, classify, hom_count_identity, irreducible_catalog};
use geofix::group::{enumerate_homs, enumerate_subgroups, hom_conjugacy_classes, subgroup_classes, weyl_group};
use geofix::gset::{BiSetSpec, GSetSpec};
use geofix::tomdieck::{aut_gset, gset_iso_classes, splitting_catalog};
use geofix::twisted::{brute_force_fixed_dim, decompose, fixed_basis, twisted_fixed_count, twisted_fixed_dims_by_orbit};
use geofix::wreath::WreathHomSpec;
use geofix::{BiSet, Caps, GSet, Group, Perm, WreathElem, WreathHom};
use serde::Deserialize;
use serde_json::{json, Value};

use crate::io::{decode, group_flag, members, read_payload, subgroup, to_value, CliResult, Failure, GroupRef};
use crate::{AcycCmd, BundleCmd, Command, GeosymCmd, GroupCmd, TomdieckCmd, TwistedCmd};

pub fn name(cmd: &Command) -> String {
    let (top, sub) = match cmd {
        Command::Group(c) => (
            "group",
            match c {
                GroupCmd::Subgroups { .. } => "subgroups",
                GroupCmd::Classes { .. } => "classes",
                GroupCmd::Weyl { .. } => "weyl",
                GroupCmd::Homs { .. } => "homs",
            },
        ),
        Command::Twisted(c) => (
            "twisted",
            match c {
                TwistedCmd::Decompose => "decompose",
                TwistedCmd::FixDim { .. } => "fix-dim",
                TwistedCmd::Basis => "basis",
            },
        ),
        Command::Bundle(c) => (
            "bundle",
            match c {
                BundleCmd::CheckFaithful => "check-faithful",
                BundleCmd::Product => "product",
                BundleCmd::Sym { .. } => "sym",
                BundleCmd::EtaLambda => "eta-lambda",
                BundleCmd::EtaLambdaRel => "eta-lambda-rel",
                BundleCmd::Iterphi => "iterphi",
                BundleCmd::Ifcrit => "ifcrit",
            },
        ),
        Command::Acyc(c) => (
            "acyc",
            match c {
                AcycCmd::Validate => "validate",
                AcycCmd::Member { .. } => "member",
                AcycCmd::Stretch { .. } => "stretch",
                AcycCmd::Smash => "smash",
                AcycCmd::Phi { .. } => "phi",
                AcycCmd::Sym { .. } => "sym",
                AcycCmd::Free => "free",
                AcycCmd::Catalog => "catalog",
                AcycCmd::Shadow { .. } => "shadow",
            },
        ),
        Command::Geosym(c) => (
            "geosym",
            match c {
                GeosymCmd::Catalog => "catalog",
                GeosymCmd::Classify => "classify",
                GeosymCmd::Centralizer => "centralizer",
                GeosymCmd::Identity { .. } => "identity",
            },
        ),
        Command::Tomdieck(c) => (
            "tomdieck",
            match c {
                TomdieckCmd::Classes { .. } => "classes",
                TomdieckCmd::Aut { .. } => "aut",
                TomdieckCmd::Catalog { .. } => "catalog",
            },
        ),
    };
    format!("{top} {sub}")
}

pub fn run(cmd: &Command, input: Option<&Path>, caps: &Caps) -> CliResult<Value> {
    match cmd {
        Command::Group(c) => group(c, caps),
        Command::Twisted(c) => twisted(c, read_payload(input)?, caps),
        Command::Bundle(c) => bundle(c, read_payload(input)?, caps),
        Command::Acyc(AcycCmd::Smash) => {
            let p: SmashInput = read_payload(input)?;
            Ok(to_value(&acyc::smash(&p.a, &p.b, caps)?))
        }
        Command::Acyc(c) => acyc_cmd(c, read_payload(input)?, caps),
        Command::Geosym(c) => geosym(c, read_payload(input)?, caps),
        Command::Tomdieck(c) => tomdieck(c, caps),
    }
}

fn wreath_elem(base: &Group, w: &WreathElem) -> Value {
    json!({
        "a": w.a.iter().map(|&x| base.element(x).clone()).collect::<Vec<Perm>>(),
        "s": w.s,
    })
}

// ---------------------------------------------------------------------------

fn group(cmd: &GroupCmd, caps: &Caps) -> CliResult<Value> {
    match cmd {
        GroupCmd::Subgroups { group } => {
            let g = group_flag(group, caps)?;
            let subs = enumerate_subgroups(&g, caps)?;
            let list: Vec<Value> =
                subs.iter().map(|h| json!({"order": h.order(), "members": members(h)})).collect();
            Ok(json!({"group": g.content_hash(), "order": g.order(), "subgroups": list}))
        }
        GroupCmd::Classes { group } => {
            let g = group_flag(group, caps)?;
            let classes = subgroup_classes(&g, caps)?;
            let list: Vec<Value> = classes
                .iter()
                .map(|cls| {
                    json!({
                        "order": cls[0].order(),
                        "conjugates": cls.len(),
                        "normal": cls.len() == 1,
                        "representative": members(&cls[0]),
                    })
                })
                .collect();
            Ok(json!({"group": g.content_hash(), "classes": list}))
        }
        GroupCmd::Weyl { group, subgroup: gens } => {
            let g = group_flag(group, caps)?;
            let gens: Vec<Perm> = decode(gens, "subgroup")?;
            let h = subgroup(&g, &gens)?;
            let w = weyl_group(&h)?;
            Ok(json!({
                "subgroup_order": h.order(),
                "normalizer_order": w.normalizer.order(),
                "weyl_order": w.weyl.order(),
                "normalizer": members(&w.normalizer),
                "coset_representatives": w.coset_reps.iter().map(|&x| g.element(x).clone()).collect::<Vec<_>>(),
            }))
        }
        GroupCmd::Homs { source, target } => {
            let a = group_flag(source, caps)?;
            let b = group_flag(target, caps)?;
            let homs = enumerate_homs(&a, &b, caps)?;
            let classes = hom_conjugacy_classes(&homs)?;
            let images: Vec<Vec<Perm>> = homs
                .iter()
                .map(|h| h.generator_images().iter().map(|&y| b.element(y).clone()).collect())
                .collect();
            Ok(json!({
                "source_generators": a.generators().iter().map(|&x| a.element(x).clone()).collect::<Vec<_>>(),
                "count": homs.len(),
                "homs": images,
                "conjugacy_classes": classes,
            }))
        }
    }
}

// ---------------------------------------------------------------------------

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TwistedInput {
    lambda: GroupRef,
    q: GroupRef,
    x: BiSetSpec,
    sigma: WreathHomSpec,
}

fn twisted(cmd: &TwistedCmd, p: TwistedInput, caps: &Caps) -> CliResult<Value> {
    let lam = p.lambda.resolve(caps)?;
    let q = p.q.resolve(caps)?;
    let x = BiSet::from_spec(&lam, &q, &p.x)?;
    let sigma = WreathHom::from_spec(&lam, &q, &p.sigma)?;
    match cmd {
        TwistedCmd::Decompose => {
            let dec = decompose(&sigma)?;
            let orbits: Vec<Value> = dec
                .orbits
                .iter()
                .map(|o| {
                    let alpha: Vec<(Perm, Perm)> = members(&o.stabilizer)
                        .into_iter()
                        .zip(&o.alpha.map)
                        .map(|(l, &a)| (l, q.element(a).clone()))
                        .collect();
                    json!({"points": o.points, "rep": o.rep, "alpha": alpha})
                })
                .collect();
            let transporters: Vec<Perm> = dec.transporters.iter().map(|&l| lam.element(l).clone()).collect();
            Ok(json!({"orbits": orbits, "orbit_of": dec.orbit_of, "transporters": transporters}))
        }
        TwistedCmd::FixDim { verify } => {
            let by_orbit = twisted_fixed_dims_by_orbit(&x, &sigma)?;
            let dim: usize = by_orbit.iter().sum();
            let count = twisted_fixed_count(&x, &sigma)?;
            let brute = if *verify { Some(brute_force_fixed_dim(&x, &sigma, caps)?) } else { None };
            Ok(json!({
                "dim": dim,
                "by_orbit": by_orbit,
                "fixed_point_count": count.to_string(),
                "brute_force_dim": brute,
            }))
        }
        TwistedCmd::Basis => {
            let dec = decompose(&sigma)?;
            let basis = fixed_basis(&x, &sigma, &dec)?;
            let list: Vec<Value> = basis
                .iter()
                .map(|v| json!({"orbit": v.orbit, "source": v.source, "vector": v.vector, "scale_sq": v.scale_sq}))
                .collect();
            Ok(json!({"dim": basis.len(), "basis": list}))
        }
    }
}

// ---------------------------------------------------------------------------

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct BundleInput {
    gamma: GroupRef,
    q: GroupRef,
    bundle: BundleSpec,
    #[serde(default)]
    lambda: Option<Vec<Perm>>,
    #[serde(default)]
    k: Option<Vec<Perm>>,
    #[serde(default)]
    m: Option<Vec<Perm>>,
    #[serde(default)]
    other: Option<BundleSpec>,
    #[serde(default)]
    other_q: Option<GroupRef>,
    /// Elements of the subgroup of the symmetric group used by `sym`.
    #[serde(default)]
    sigma: Option<Vec<Perm>>,
}

fn summary(b: &BundleData, caps: &Caps) -> Value {
    json!({
        "base_points": b.base().size(),
        "total_points": b.total().size(),
        "fiber_dims": b.fiber_dims(),
        "q": b.q().spec(),
        "spec": b.spec(caps).ok(),
    })
}

fn required(v: &Option<Vec<Perm>>, field: &str) -> CliResult<Vec<Perm>> {
    v.clone().ok_or_else(|| Failure::invalid(format!("payload at /{field}: missing field")))
}

fn bundle(cmd: &BundleCmd, p: BundleInput, caps: &Caps) -> CliResult<Value> {
    let gamma = p.gamma.resolve(caps)?;
    let q = p.q.resolve(caps)?;
    let b = BundleData::from_spec(&gamma, &q, &p.bundle, caps)?;
    let sub = |field: &str, v: &Option<Vec<Perm>>| -> CliResult<geofix::Subgroup> { subgroup(&gamma, &required(v, field)?) };
    match cmd {
        BundleCmd::CheckFaithful => Ok(to_value(&b.is_q_faithful())),
        BundleCmd::Product => {
            let other = p.other.as_ref().ok_or_else(|| Failure::invalid("payload at /other: missing field"))?;
            let q2 = match &p.other_q {
                Some(r) => r.resolve(caps)?,
                None => q.clone(),
            };
            let b2 = BundleData::from_spec(&gamma, &q2, other, caps)?;
            let (prod, _) = b.product(&b2, caps)?;
            Ok(summary(&prod, caps))
        }
        BundleCmd::Sym { power } => {
            let sp = b.sym_power(*power, p.sigma.as_deref(), caps)?;
            Ok(summary(&sp.bundle, caps))
        }
        BundleCmd::EtaLambda | BundleCmd::EtaLambdaRel => {
            let lambda = sub("lambda", &p.lambda)?;
            let d = if matches!(cmd, BundleCmd::EtaLambda) {
                b.eta_lambda(&lambda, caps)?
            } else {
                b.eta_lambda_rel(&lambda, &sub("k", &p.k)?, caps)?
            };
            let comps: Vec<usize> = d.components().iter().map(|c| c.len()).collect();
            Ok(json!({
                "homs": d.homs.len(),
                "component_sizes": comps,
                "base_origin": d.base_origin,
                "bundle": summary(&d.bundle, caps),
            }))
        }
        BundleCmd::Iterphi => {
            let r = iterphi_bundle_iso(&b, &sub("k", &p.k)?, &sub("lambda", &p.lambda)?, &sub("m", &p.m)?, caps)?;
            Ok(to_value(&r))
        }
        BundleCmd::Ifcrit => Ok(to_value(&b.ifcrit_check(&sub("lambda", &p.lambda)?, caps)?)),
    }
}

// ---------------------------------------------------------------------------

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SmashInput {
    a: AcycData,
    b: AcycData,
}

fn acyc_cmd(cmd: &AcycCmd, d: AcycData, caps: &Caps) -> CliResult<Value> {
    match cmd {
        AcycCmd::Validate => {
            let v = d.validate(caps);
            if v.is_empty() {
                Ok(json!({"ok": true}))
            } else {
                Err(Failure::Validation(v))
            }
        }
        AcycCmd::Member { p: None } => Ok(to_value(&d.in_d_acyc(caps)?)),
        AcycCmd::Member { p: Some(p) } => Ok(to_value(&d.in_d_acyc_p(*p, caps)?)),
        AcycCmd::Stretch { k } => Ok(to_value(&acyc::stretch(&d, *k, caps)?)),
        AcycCmd::Phi { k } => Ok(to_value(&acyc::phi(&d, *k, caps)?)),
        AcycCmd::Sym { k } => Ok(to_value(&acyc::sym(&d, *k, caps)?)),
        AcycCmd::Free => Ok(to_value(&acyc::free_smash(&d))),
        AcycCmd::Catalog => Ok(to_value(&acyc::component_catalog(&d, caps)?)),
        AcycCmd::Shadow { k } => {
            let r = acyc::faithfulness_shadow(&d, *k, caps)?;
            let mut v = to_value(&r);
            v["summary"] = Value::String(r.summary());
            Ok(v)
        }
        AcycCmd::Smash => unreachable!("handled with its own payload"),
    }
}

// ---------------------------------------------------------------------------

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GeosymInput {
    lambda: GroupRef,
    q: GroupRef,
    #[serde(default)]
    sigma: Option<WreathHomSpec>,
}

fn geosym(cmd: &GeosymCmd, p: GeosymInput, caps: &Caps) -> CliResult<Value> {
    let lam = p.lambda.resolve(caps)?;
    let q = p.q.resolve(caps)?;
    let catalog = irreducible_catalog(&lam, &q, caps)?;
    let sigma = || -> CliResult<WreathHom> {
        let s = p.sigma.as_ref().ok_or_else(|| Failure::invalid("payload at /sigma: missing field"))?;
        Ok(WreathHom::from_spec(&lam, &q, s)?)
    };
    match cmd {
        GeosymCmd::Catalog => {
            let list: Vec<Value> = catalog
                .classes
                .iter()
                .map(|c| {
                    let alpha: Vec<(Perm, Perm)> = members(&c.subgroup)
                        .into_iter()
                        .zip(&c.alpha.map)
                        .map(|(l, &a)| (l, q.element(a).clone()))
                        .collect();
                    json!({"cardinality": c.cardinality, "alpha": alpha, "tau": c.tau.spec()})
                })
                .collect();
            Ok(json!({"lambda_order": lam.order(), "q_order": q.order(), "classes": list}))
        }
        GeosymCmd::Classify => {
            let s = sigma()?;
            let r = classify(&s, &catalog)?;
            Ok(json!({"n": r.n, "conjugator": wreath_elem(&q, &r.conjugator)}))
        }
        GeosymCmd::Centralizer => {
            let s = sigma()?;
            let c = centralizer(&s, caps)?;
            let elems: Vec<Value> = c.iter().map(|w| wreath_elem(&q, w)).collect();
            Ok(json!({"order": c.len(), "elements": elems}))
        }
        GeosymCmd::Identity { q: qq } => Ok(to_value(&hom_count_identity(&catalog, *qq, caps)?)),
    }
}

// ---------------------------------------------------------------------------

fn tomdieck(cmd: &TomdieckCmd, caps: &Caps) -> CliResult<Value> {
    match cmd {
        TomdieckCmd::Classes { group, q } => {
            let g = group_flag(group, caps)?;
            Ok(to_value(&gset_iso_classes(&g, *q, caps)?))
        }
        TomdieckCmd::Aut { group, z } => {
            let g = group_flag(group, caps)?;
            let spec: GSetSpec = decode(z, "z")?;
            let z = GSet::from_spec(&g, &spec)?;
            Ok(to_value(&aut_gset(&z, caps)?))
        }
        TomdieckCmd::Catalog { group, m, qmax } => {
            let g = group_flag(group, caps)?;
            Ok(to_value(&splitting_catalog(&g, *m, qmax.unwrap_or(caps.q_max), caps)?))
        }
    }
}
