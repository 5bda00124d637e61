//! Exact curve and section data, one plain-text file per formula.
//!
//! Each line reads `name.num: c0 c1 ...` or `name.den: c0 c1 ...`, listing
//! coefficients lowest degree first; `a` or `a:b` stands for a + b√−3 with
//! rational a, b. Lines starting with `#` are comments; the first one is the
//! description.

use std::collections::BTreeMap;
use std::str::FromStr;

use sha2::{Digest, Sha256};

use super::curve::{FunctionFieldCurve, SectionPoint};
use crate::error::{Error, Result};
use crate::exactalg::{Poly, QuadElem, RatFunc};

macro_rules! fixtures {
    ($($name:literal => $sha:literal),* $(,)?) => {
        const FIXTURES: &[(&str, &str, &str)] = &[
            $(($name, include_str!(concat!("../../data/fixtures/", $name, ".txt")), $sha)),*
        ];
    };
}

fixtures! {
    "halving_q" => "7b15e1bc540dfdb0f1563faca48728ee44347dcea7cd55d602d67ccba2b82f1b",
    "halving_root" => "c2893d1ab2e645f25a98cbef8ca4bc9b627355a4e2c04444d9d8e34a2ffca6d2",
    "k3_model" => "44147c93b6636f149d81665b99ac809d44609ef1b65d403805e7111cbec2fa8a",
    "k3_section" => "46654be95a17b4cc080d0ba9c6605e4db96d538b5ec01cdf3735c75af1ed7e55",
    "k3_torsion" => "098f06ea728adae0f543103be506659cd48d0aaaf4b7f358490a6accc5a80e98",
    "neron_s0" => "29b3bbaed97b7a158212750568bb8982ba4ba71d9810a4d7c26c6c9b495b985d",
    "neron_sigma0" => "95bd9f14bf198d514b07930fd21aa6c88443c0446f9ec73d294a1b858f673dc1",
    "p_minus3" => "25fd59f086a8234a0e92159324ea4e3e46f2b416a191fb32371d42ca4a0fb075",
    "p_sigma" => "0ecd6f66db8926552f604e0079a282f3fde4dc28b7b77b2f11a9242d95038700",
    "p_sigma_plus_3rho6" => "863467b60b3e23a8035f1ce122dba30fed391ec124ac8caccc6d997eee903246",
    "sigma18_form" => "32834ce91e7b238fb98ceffb9c4024684e4380138ed986cbb2cc657f6a198868",
    "y18_model" => "ad78e22b1ed71cd7756460b762006395aefda6552178124d0c0b4381c765dd09",
    "y18_model_s" => "89a351bce0784eb322a04b9c1ea42889d0607ab3d5ff9f2aaac4d7a7ca9e6310",
    "y18_torsion" => "69642f45df53e08bc0d0c500ea0d43d9cd866fd8dd47a68d47b62fe6f5bf292c",
    "y_minus3_model" => "928fabc55f03e1be4ac40fb397e857a62c28e485e6654d31b3d8270e29b52b26",
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fixture {
    pub name: String,
    pub description: String,
    entries: BTreeMap<String, RatFunc>,
}

pub fn fixture_names() -> impl Iterator<Item = &'static str> {
    FIXTURES.iter().map(|(n, _, _)| *n)
}

/// Load and checksum-verify a fixture.
pub fn fixture(name: &str) -> Result<Fixture> {
    let err = |reason: String| Error::Fixture { name: name.to_string(), reason };
    let (_, text, sha) =
        FIXTURES.iter().find(|(n, _, _)| *n == name).ok_or_else(|| err("no such fixture".into()))?;
    let digest = hex::encode(Sha256::digest(text.as_bytes()));
    if digest != *sha {
        return Err(err(format!("checksum {digest} does not match {sha}")));
    }
    parse_fixture(name, text)
}

fn parse_fixture(name: &str, text: &str) -> Result<Fixture> {
    let err = |reason: String| Error::Fixture { name: name.to_string(), reason };
    let mut description = String::new();
    let mut parts: BTreeMap<String, (Option<Poly>, Option<Poly>)> = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(c) = line.strip_prefix('#') {
            if description.is_empty() {
                description = c.trim().to_string();
            }
            continue;
        }
        let (key, coeffs) = line.split_once(':').ok_or_else(|| err(format!("line {}: missing ':'", i + 1)))?;
        let (entry, which) =
            key.trim().rsplit_once('.').ok_or_else(|| err(format!("line {}: key {key:?} lacks .num/.den", i + 1)))?;
        let c = coeffs
            .split_whitespace()
            .map(QuadElem::from_str)
            .collect::<Result<Vec<_>>>()
            .map_err(|e| err(format!("line {}: {e}", i + 1)))?;
        let slot = parts.entry(entry.to_string()).or_default();
        let target = match which {
            "num" => &mut slot.0,
            "den" => &mut slot.1,
            other => return Err(err(format!("line {}: unknown part {other:?}", i + 1))),
        };
        if target.replace(Poly::new(c)).is_some() {
            return Err(err(format!("line {}: duplicate {key}", i + 1)));
        }
    }
    let mut entries = BTreeMap::new();
    for (k, (num, den)) in parts {
        let (Some(num), Some(den)) = (num, den) else {
            return Err(err(format!("{k} needs both num and den")));
        };
        entries.insert(k.clone(), RatFunc::new(num, den).map_err(|e| err(format!("{k}: {e}")))?);
    }
    Ok(Fixture { name: name.to_string(), description, entries })
}

impl Fixture {
    pub fn get(&self, key: &str) -> Result<&RatFunc> {
        self.entries
            .get(key)
            .ok_or_else(|| Error::Fixture { name: self.name.clone(), reason: format!("no entry {key}") })
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    /// The curve with entries a1, a2, a3, a4, a6.
    pub fn curve(&self) -> Result<FunctionFieldCurve> {
        let g = |k| self.get(k).cloned();
        FunctionFieldCurve::new([g("a1")?, g("a2")?, g("a3")?, g("a4")?, g("a6")?])
    }

    /// The point with entries `x`, `y`, or `prefix.x`, `prefix.y`.
    pub fn point(&self, prefix: &str) -> Result<SectionPoint> {
        let key = |c: &str| if prefix.is_empty() { c.to_string() } else { format!("{prefix}.{c}") };
        Ok(SectionPoint::affine(self.get(&key("x"))?.clone(), self.get(&key("y"))?.clone()))
    }

    /// A constant entry.
    pub fn constant(&self, key: &str) -> Result<QuadElem> {
        self.get(key)?.as_constant().ok_or_else(|| Error::Fixture {
            name: self.name.clone(),
            reason: format!("{key} is not constant"),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_fixtures_load() {
        for name in fixture_names() {
            let f = fixture(name).unwrap();
            assert!(!f.description.is_empty(), "{name}");
            assert!(f.keys().count() > 0);
        }
        assert!(fixture("missing").is_err());
    }

    #[test]
    fn parse_errors() {
        assert!(parse_fixture("t", "x.num: 1 2\n").is_err());
        assert!(parse_fixture("t", "x.num: 1\nx.num: 2\nx.den: 1\n").is_err());
        assert!(parse_fixture("t", "x.num: 1\nx.den: 0\n").is_err());
        assert!(parse_fixture("t", "x.foo: 1\n").is_err());
        assert!(parse_fixture("t", "x.num: 1 q\nx.den: 1\n").is_err());
        let f = parse_fixture("t", "# d\nx.num: 0 1/2:3\nx.den: 2\n").unwrap();
        let want = Poly::new(vec![QuadElem::zero(), QuadElem::from_str("1/4:3/2").unwrap()]);
        assert_eq!(f.get("x").unwrap(), &RatFunc::from(want));
    }
}
