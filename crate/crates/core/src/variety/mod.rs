//! Varieties given by identities, with normal forms for polynomials in the
//! shipped ones.

pub mod ab;
pub mod cring;
pub mod groups;
pub mod pointed;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::terms::{parse_term, FinAlgebra, Signature, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VarietyKind {
    PointedSet,
    Groups,
    Ab,
    Cring,
    Custom,
}

impl VarietyKind {
    pub fn name(self) -> &'static str {
        match self {
            VarietyKind::PointedSet => "pointed_set",
            VarietyKind::Groups => "groups",
            VarietyKind::Ab => "ab",
            VarietyKind::Cring => "cring",
            VarietyKind::Custom => "custom",
        }
    }
}

/// An identity `lhs = rhs` in `arity` variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Identity {
    pub lhs: Term,
    pub rhs: Term,
    pub arity: usize,
    pub text: String,
}

impl Identity {
    pub fn parse(text: &str, sig: &Signature) -> Result<Self> {
        let (l, r) = text
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("identity `{text}` has no `=`")))?;
        let (lhs, n1) = parse_term(l, sig, &[])?;
        let (rhs, n2) = parse_term(r, sig, &[])?;
        Ok(Identity {
            lhs,
            rhs,
            arity: n1.max(n2),
            text: text.trim().to_string(),
        })
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Variety {
    name: String,
    kind: VarietyKind,
    sig: Signature,
    identities: Vec<Identity>,
}

impl Variety {
    fn shipped(kind: VarietyKind, sig: Signature, ids: &[&str]) -> Self {
        let identities = ids
            .iter()
            .map(|s| Identity::parse(s, &sig).expect("static identity"))
            .collect();
        Variety {
            name: kind.name().to_string(),
            kind,
            sig,
            identities,
        }
    }

    pub fn groups() -> Self {
        Self::shipped(VarietyKind::Groups, groups::signature(), groups::IDENTITIES)
    }

    pub fn ab() -> Self {
        Self::shipped(VarietyKind::Ab, ab::signature(), ab::IDENTITIES)
    }

    pub fn cring() -> Self {
        Self::shipped(VarietyKind::Cring, cring::signature(), cring::IDENTITIES)
    }

    pub fn pointed_set() -> Self {
        Self::shipped(VarietyKind::PointedSet, pointed::signature(), pointed::IDENTITIES)
    }

    pub fn by_name(name: &str) -> Result<Self> {
        match name {
            "groups" => Ok(Self::groups()),
            "ab" => Ok(Self::ab()),
            "cring" => Ok(Self::cring()),
            "pointed_set" => Ok(Self::pointed_set()),
            _ => Err(Error::Invalid(format!("unknown variety `{name}`"))),
        }
    }

    /// A variety given only by identities; it has no normal forms.
    pub fn custom(name: &str, sig: Signature, identities: &[&str]) -> Result<Self> {
        let identities = identities
            .iter()
            .map(|s| Identity::parse(s, &sig))
            .collect::<Result<_>>()?;
        Ok(Variety {
            name: name.to_string(),
            kind: VarietyKind::Custom,
            sig,
            identities,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> VarietyKind {
        self.kind
    }

    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    pub fn identities(&self) -> &[Identity] {
        &self.identities
    }

    pub fn has_canonicalizer(&self) -> bool {
        self.kind != VarietyKind::Custom
    }

    fn check_sig(&self, a: &FinAlgebra) -> Result<()> {
        if a.signature().same_shape(&self.sig) {
            Ok(())
        } else {
            Err(Error::SignatureMismatch(format!(
                "{} does not have the signature of {}",
                a.name(),
                self.name
            )))
        }
    }

    /// Normal form of a polynomial with coefficients in `a`.
    pub fn canon(&self, a: &FinAlgebra, t: &Term) -> Result<Term> {
        self.check_sig(a)?;
        match self.kind {
            VarietyKind::Groups => groups::canon(a, t),
            VarietyKind::Ab => ab::canon(a, t),
            VarietyKind::Cring => cring::canon(a, t),
            VarietyKind::PointedSet => pointed::canon(a, t),
            VarietyKind::Custom => Err(Error::NoCanonicalizer(self.name.clone())),
        }
    }

    pub fn poly_equal(&self, a: &FinAlgebra, p: &Term, q: &Term) -> Result<bool> {
        Ok(self.canon(a, p)? == self.canon(a, q)?)
    }

    /// First identity failing in `b`, with the offending tuple.
    pub fn violation(&self, b: &FinAlgebra) -> Option<(&Identity, Vec<usize>)> {
        if !b.signature().same_shape(&self.sig) {
            return None;
        }
        self.identities
            .iter()
            .find_map(|id| b.find_violation(&id.lhs, &id.rhs, id.arity).map(|w| (id, w)))
    }

    pub fn in_variety(&self, b: &FinAlgebra) -> bool {
        b.signature().same_shape(&self.sig) && self.violation(b).is_none()
    }
}
