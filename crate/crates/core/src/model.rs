//! Model specifications: a group ∏ Z_{N_i} and a twist, read from TOML.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::groupcohomology::{
    build_cocycle_2p1d, build_cocycle_3p1d, CocycleTable, GroupData, TermKind, TwistSpec, TwistTerm,
};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupSpec {
    pub orders: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelSpec {
    #[serde(default)]
    pub name: String,
    pub group: GroupSpec,
    pub twist: TwistSpec,
    /// Optional entry overrides `[[a, b, c], k]` setting ω(a,b,c) = ζ_L^k, for
    /// deliberately corrupted inputs. Arguments are element indices.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub overrides: Vec<(Vec<usize>, u64)>,
}

#[derive(Clone, Debug)]
pub struct Model {
    pub spec: ModelSpec,
    pub group: GroupData,
    pub cocycle: CocycleTable,
}

pub const BUILTIN_2D: [&str; 5] = ["trivial2d", "toric", "semion", "z2z2_p12", "z2cubed_p123"];
pub const BUILTIN_3D: [&str; 4] = ["trivial3d", "z2_3d", "z2z2_p112", "z2four_p1234"];

impl ModelSpec {
    pub fn new(name: &str, orders: &[u32], twist: TwistSpec) -> Self {
        ModelSpec { name: name.into(), group: GroupSpec { orders: orders.to_vec() }, twist, overrides: vec![] }
    }

    pub fn builtin(name: &str) -> Result<Self> {
        let t = |d, k, i: &[usize]| TwistSpec::with(d, k, i, 1);
        Ok(match name {
            "trivial2d" => Self::new(name, &[], TwistSpec::trivial(3)),
            "toric" => Self::new(name, &[2], TwistSpec::trivial(3)),
            "semion" => Self::new(name, &[2], t(3, TermKind::Pair, &[1, 1])),
            "z2z2_p12" => Self::new(name, &[2, 2], t(3, TermKind::Pair, &[1, 2])),
            "z2cubed" => Self::new(name, &[2, 2, 2], TwistSpec::trivial(3)),
            "z2cubed_p123" => Self::new(name, &[2, 2, 2], t(3, TermKind::Triple, &[1, 2, 3])),
            "trivial3d" => Self::new(name, &[], TwistSpec::trivial(4)),
            "z2_3d" => Self::new(name, &[2], TwistSpec::trivial(4)),
            "z2z2_3d" => Self::new(name, &[2, 2], TwistSpec::trivial(4)),
            "z2z2_p112" => Self::new(name, &[2, 2], t(4, TermKind::Triple4, &[1, 1, 2])),
            "z2four_3d" => Self::new(name, &[2, 2, 2, 2], TwistSpec::trivial(4)),
            "z2four_p1234" => Self::new(name, &[2, 2, 2, 2], t(4, TermKind::Quad, &[1, 2, 3, 4])),
            _ => return Err(Error::UnknownName(name.to_string())),
        })
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("model spec serializes")
    }

    /// SHA-256 of the canonical TOML form.
    pub fn hash(&self) -> String {
        let digest = Sha256::digest(self.to_toml().as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn untwisted(&self) -> Self {
        ModelSpec {
            name: format!("{}-untwisted", self.name),
            twist: TwistSpec::trivial(self.twist.dimension),
            overrides: vec![],
            ..self.clone()
        }
    }
}

impl Model {
    pub fn new(spec: ModelSpec) -> Result<Self> {
        Self::with_caps(spec, Caps::current())
    }

    pub fn with_caps(spec: ModelSpec, caps: Caps) -> Result<Self> {
        let group = GroupData::with_caps(&spec.group.orders, caps)?;
        let mut cocycle = match spec.twist.dimension {
            3 => build_cocycle_2p1d(&group, &spec.twist)?,
            4 => build_cocycle_3p1d(&group, &spec.twist)?,
            d => return Err(Error::Degree(format!("twist dimension must be 3 or 4, got {d}"))),
        };
        for (args, k) in &spec.overrides {
            if args.len() != cocycle.degree() || args.iter().any(|&a| a >= group.size()) {
                return Err(Error::IndexOutOfRange(format!("override {args:?}")));
            }
            if cocycle.order() == 1 {
                cocycle = cocycle.lifted(2);
            }
            cocycle.set_exp(args, *k);
        }
        Ok(Model { spec, group, cocycle })
    }

    pub fn builtin(name: &str) -> Result<Self> {
        Self::new(ModelSpec::builtin(name)?)
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        Self::new(ModelSpec::from_toml(text)?)
    }

    pub fn name(&self) -> &str {
        &self.spec.name
    }

    /// Spacetime dimension of the state sum (3 or 4).
    pub fn dimension(&self) -> usize {
        self.cocycle.degree()
    }

    pub fn with_cocycle(&self, cocycle: CocycleTable) -> Self {
        Model { cocycle, ..self.clone() }
    }
}

pub fn term(kind: TermKind, indices: &[usize], p: i64) -> TwistTerm {
    TwistTerm { kind, indices: indices.to_vec(), p }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn toml_round_trip() {
        let text = r#"
name = "semion"
[group]
orders = [2]
[twist]
dimension = 3
terms = [{ kind = "pair", indices = [1, 1], p = 1 }]
"#;
        let s = ModelSpec::from_toml(text).unwrap();
        assert_eq!(s, ModelSpec::builtin("semion").unwrap());
        assert_eq!(ModelSpec::from_toml(&s.to_toml()).unwrap(), s);
        assert_eq!(s.hash().len(), 64);
        assert!(ModelSpec::from_toml("group = 3").is_err());
    }

    #[test]
    fn builtins_construct() {
        for n in BUILTIN_2D.iter().chain(BUILTIN_3D.iter()) {
            let m = Model::builtin(n).unwrap();
            assert_eq!(m.name(), *n);
        }
    }
}
