//! The verification battery behind `modring verify`: every law and theorem
//! check the library knows, run over a fleet of algebras with their modules
//! and overalgebras. The report is a pure function of the options.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::fleet::{self, FleetEntry};
use crate::modulization::modulize;
use crate::overalg::{module_homs, AModule, ModuleHom};
use crate::report::VERSION;
use crate::ringoid::{
    canonical_map, check_action_laws, check_difference_term, check_ringoid_laws, check_single_generators,
    check_unit_conjugation, compare_j_r, enveloping_ringoid, functor_g, functor_h, z_of_module, Envelope,
};
use crate::variety::VarietyKind;
use crate::zlinalg::{Int, IntMatrix};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyOptions {
    pub seed: u64,
    pub depth: usize,
    pub max_depth: usize,
    /// Random samples per sampled property.
    pub samples: usize,
    /// Modules whose fibers have more elements are skipped by the action battery.
    pub max_fiber_order: u64,
    /// Add a module that is not totally in its variety to the `C2` entry.
    pub inject_fault: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            seed: 0,
            depth: 5,
            max_depth: 6,
            samples: 50,
            max_fiber_order: 4,
            inject_fault: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub subject: String,
    pub check: String,
    pub passed: bool,
    /// Counterexample or error on failure, a count or summary otherwise.
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnvelopeSummary {
    pub subject: String,
    pub depth: Option<usize>,
    pub stabilized: bool,
    pub iso_types: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub version: String,
    pub seed: u64,
    pub depth: usize,
    pub max_depth: usize,
    pub envelopes: Vec<EnvelopeSummary>,
    pub checks: Vec<CheckResult>,
    pub passed: usize,
    pub failed: usize,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

struct Recorder {
    checks: Vec<CheckResult>,
}

impl Recorder {
    fn push(&mut self, subject: &str, check: &str, outcome: std::result::Result<String, String>) -> bool {
        let (passed, detail) = match outcome {
            Ok(d) => (true, d),
            Err(d) => (false, d),
        };
        self.checks.push(CheckResult {
            subject: subject.to_string(),
            check: check.to_string(),
            passed,
            detail,
        });
        passed
    }

    fn result<T>(&mut self, subject: &str, check: &str, r: Result<T>, ok: impl FnOnce(T) -> String) -> bool {
        self.push(subject, check, r.map(ok).map_err(|e| e.to_string()))
    }

    fn flag(&mut self, subject: &str, check: &str, holds: bool, failure: &str) -> bool {
        self.push(subject, check, if holds { Ok(String::new()) } else { Err(failure.to_string()) })
    }
}

/// The `C2` fleet entry plus a copy of `Z4 sign` whose second part of
/// `g * g` is multiplication by 2, so the group identities fail in it.
pub fn fault_fixture() -> FleetEntry {
    let mut e = fleet::entry("C2").expect("C2 is in the fleet");
    let good = e
        .modules
        .iter()
        .find(|(n, _)| n == "Z4 sign")
        .map(|(_, m)| m.clone())
        .expect("C2 has a Z4 sign module");
    let bad = good.with_part_unchecked(crate::variety::groups::MUL, &[1, 1], 1, IntMatrix::scalar(1, 2));
    e.modules.push(("Z4 faulty".into(), bad));
    e
}

/// The battery over the default fleet (with the fault fixture if asked).
pub fn verify(opts: &VerifyOptions) -> VerifyReport {
    let mut entries = fleet::default_fleet();
    if opts.inject_fault {
        entries[0] = fault_fixture();
    }
    verify_fleet(&entries, opts)
}

fn small(m: &AModule, bound: u64) -> bool {
    m.fibers()
        .iter()
        .all(|g| g.order().is_some_and(|o| o <= Int::from(bound)))
}

pub fn verify_fleet(entries: &[FleetEntry], opts: &VerifyOptions) -> VerifyReport {
    let mut rec = Recorder { checks: Vec::new() };
    let mut envelopes = Vec::new();
    for e in entries {
        let name = e.name();
        let violation = e
            .variety
            .violation(&e.algebra)
            .map(|(id, w)| format!("{id} fails at {w:?}"));
        rec.push(&name, "algebra lies in the variety", violation.map_or(Ok(String::new()), Err));
        for (n, m) in &e.modules {
            rec.result(&format!("{name} {n}"), "module is totally in the variety", m.check_totally_in(&e.variety), |_| {
                String::new()
            });
        }
        for (n, p) in &e.overalgebras {
            rec.result(
                &format!("{name} {n}"),
                "overalgebra is totally in the variety",
                p.check_totally_in(&e.variety),
                |_| String::new(),
            );
        }

        let env = enveloping_ringoid(&e.variety, e.algebra.clone(), opts.depth, opts.max_depth);
        envelopes.push(EnvelopeSummary {
            subject: name.clone(),
            depth: env.as_ref().ok().map(Envelope::depth),
            stabilized: env.as_ref().is_ok_and(Envelope::is_stabilized),
            iso_types: env
                .as_ref()
                .map(|z| z.ringoid().iso_types().iter().map(ToString::to_string).collect())
                .unwrap_or_default(),
        });
        let env = match env {
            Ok(env) => {
                rec.push(&name, "presentation stabilizes", Ok(format!("depth {}", env.depth())));
                env
            }
            Err(err) => {
                rec.push(&name, "presentation stabilizes", Err(err.to_string()));
                continue;
            }
        };
        envelope_checks(&mut rec, &name, &env, e, opts);
        modulization_checks(&mut rec, &name, e, opts);
    }
    let failed = rec.checks.iter().filter(|c| !c.passed).count();
    VerifyReport {
        version: VERSION.to_string(),
        seed: opts.seed,
        depth: opts.depth,
        max_depth: opts.max_depth,
        envelopes,
        passed: rec.checks.len() - failed,
        failed,
        checks: rec.checks,
    }
}

fn envelope_checks(rec: &mut Recorder, name: &str, env: &Envelope, e: &FleetEntry, opts: &VerifyOptions) {
    rec.result(name, "ringoid axioms on generators", env.ringoid().check(), |_| String::new());
    match check_ringoid_laws(env, 3) {
        Ok(r) => {
            for c in r.checks {
                rec.push(name, &format!("ringoid law: {}", c.law), if c.passed { Ok(c.detail) } else { Err(c.detail) });
            }
        }
        Err(err) => {
            rec.push(name, "ringoid laws", Err(err.to_string()));
        }
    }

    let modules: Vec<&(String, AModule)> = e.modules.iter().filter(|(_, m)| small(m, opts.max_fiber_order)).collect();
    // naturality is only tested along maps into modules that are in V
    let targets: Vec<&AModule> = modules
        .iter()
        .map(|(_, m)| m)
        .filter(|m| m.is_totally_in(&e.variety))
        .collect();
    let homs: Vec<Vec<Vec<ModuleHom>>> = modules
        .iter()
        .map(|(_, src)| {
            targets
                .iter()
                .map(|dst| module_homs(src, dst).unwrap_or_default())
                .collect()
        })
        .collect();
    for (i, (n, m)) in modules.iter().enumerate() {
        let subject = format!("{name} {n}");
        let pairs: Vec<(&AModule, &ModuleHom)> = targets
            .iter()
            .zip(&homs[i])
            .flat_map(|(&dst, hs)| hs.iter().map(move |h| (dst, h)))
            .collect();
        match check_action_laws(env, m, &pairs, 3) {
            Ok(r) => {
                for c in r.checks {
                    rec.push(&subject, &format!("action law: {}", c.law), if c.passed { Ok(c.detail) } else { Err(c.detail) });
                }
            }
            Err(err) => {
                rec.push(&subject, "action laws", Err(err.to_string()));
            }
        }
        let round_trip = functor_g(env, m).and_then(|g| {
            let h = functor_h(env, &g)?;
            let back = functor_g(env, &h)?;
            Ok((h.same_as(m), back.same_as(&g)))
        });
        match round_trip {
            Ok((hg, gh)) => {
                rec.flag(&subject, "H G is the identity on operation parts", hg, "H(G(M)) differs from M");
                rec.flag(&subject, "G H is the identity on generator actions", gh, "G(H(G(M))) differs from G(M)");
            }
            Err(err) => {
                rec.push(&subject, "G and H are defined", Err(err.to_string()));
            }
        }
        let fm = z_of_module(m).and_then(|zm| canonical_map(env, &zm, m).map(|_| zm));
        rec.result(&subject, "f_M is well defined and onto Z_M", fm, |zm| {
            let ranks: Vec<String> = zm.ringoid().homs().iter().map(|h| h.rank().to_string()).collect();
            format!("Z_M generators per hom-group: {}", ranks.join(" "))
        });
    }

    if matches!(e.variety.kind(), VarietyKind::Groups | VarietyKind::Ab) && e.algebra.size() <= 2 {
        for d in 3..=env.depth() {
            let c = compare_j_r(env, d);
            let outcome = match c {
                Ok(c) if c.equal() => Ok(String::new()),
                Ok(c) => Err(c.witness.unwrap_or_default()),
                Err(err) => Err(err.to_string()),
            };
            rec.push(name, &format!("J = R at depth {d}"), outcome);
        }
    }

    if e.variety.kind() == VarietyKind::Groups {
        rec.result(
            name,
            "every hom-group element is a single generator",
            check_single_generators(env, opts.samples / 5, opts.seed),
            |n| format!("{n} elements lifted"),
        );
        rec.result(
            name,
            "difference term is additive",
            check_difference_term(env, opts.samples, 3, opts.seed),
            |n| format!("{n} triples"),
        );
        rec.result(name, "endomorphism rings are conjugate", check_unit_conjugation(env), |_| String::new());
    }
}

fn modulization_checks(rec: &mut Recorder, name: &str, e: &FleetEntry, opts: &VerifyOptions) {
    for (n, p) in &e.overalgebras {
        let subject = format!("{name} {n}");
        let md = modulize(p);
        rec.result(&subject, "eta is a pointed homomorphism", md.check_eta(), |_| String::new());
        rec.flag(&subject, "eta images span", md.eta_spans(), "the images of eta do not generate");
        rec.flag(&subject, "saturation is idempotent", md.saturation_is_idempotent(), "re-saturation grew K");
        rec.result(&subject, "unary parts factor through eta", md.check_term_factorization(3, 2), |_| String::new());
        rec.flag(
            &subject,
            "identities transfer to the modulization",
            md.check_identity_transfer(e.variety.identities()),
            "an identity of the total algebra fails in the modulization",
        );
        rec.result(&subject, "modulization is totally in the variety", md.result.check_totally_in(&e.variety), |_| {
            String::new()
        });
        for (mn, m) in e.modules.iter().filter(|(_, m)| small(m, opts.max_fiber_order)) {
            rec.result(&subject, &format!("universal arrow into {mn}"), md.check_universal(m), |k| {
                format!("{k} pointed maps")
            });
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fault_is_located() {
        let opts = VerifyOptions {
            samples: 5,
            ..VerifyOptions::default()
        };
        let rep = verify_fleet(&[fault_fixture()], &opts);
        assert!(!rep.all_passed());
        let first = rep.failures().next().unwrap();
        assert_eq!(first.subject, "C2/groups Z4 faulty");
        assert!(first.detail.contains("fails at base tuple"), "{}", first.detail);
        for c in rep.failures() {
            assert!(c.subject.contains("faulty") || c.check.contains("faulty"), "{c:?}");
        }
    }

    #[test]
    fn small_fleet_passes() {
        let opts = VerifyOptions {
            samples: 5,
            ..VerifyOptions::default()
        };
        let entries: Vec<FleetEntry> = ["C2", "Z2", "Z2ring", "Pt2"].iter().map(|n| fleet::entry(n).unwrap()).collect();
        let rep = verify_fleet(&entries, &opts);
        let bad: Vec<_> = rep.failures().collect();
        assert!(bad.is_empty(), "{bad:?}");
        assert!(rep.passed > 100);
    }
}
