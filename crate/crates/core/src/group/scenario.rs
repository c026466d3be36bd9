use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::engine::{Factor, GenId, GenRole, Group, Word};
use super::subgroup::Subgroup;

/// Presentation classes accepted in scenario files.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GroupSpec {
    Trivial {},
    FreeGroup {
        #[serde(default)]
        rank: Option<usize>,
        #[serde(default)]
        generators: Option<Vec<String>>,
    },
    /// Order 0 is an infinite cyclic factor.
    FreeProductCyclic {
        orders: Vec<u32>,
        #[serde(default)]
        generators: Option<Vec<String>>,
    },
    SemidirectZFree {
        #[serde(default)]
        rank: Option<usize>,
        #[serde(default)]
        generators: Option<Vec<String>>,
        #[serde(default)]
        stable: Option<String>,
        #[serde(default)]
        phi: Option<BTreeMap<String, String>>,
    },
    /// Identifications pair a left generator with a right generator.
    Amalgam {
        left: Box<GroupSpec>,
        right: Box<GroupSpec>,
        identifications: Vec<(String, String)>,
    },
    FreeProduct {
        factors: Vec<GroupSpec>,
    },
}

/// A designated subgroup: a generator list or one of `"trivial"`, `"whole"`, `"fiber"`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SubgroupSpec {
    Generators(Vec<String>),
    Tag(String),
}

/// Scenario file: a group description plus named subgroups and symbol aliases.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScenarioFile {
    #[serde(default)]
    pub name: Option<String>,
    #[serde(flatten)]
    pub group: GroupSpec,
    #[serde(default)]
    pub subgroups: BTreeMap<String, SubgroupSpec>,
    #[serde(default)]
    pub aliases: BTreeMap<String, String>,
}

fn default_names(pool: &str, n: usize) -> Vec<String> {
    let pool: Vec<char> = pool.chars().collect();
    if n <= pool.len() {
        pool[..n].iter().map(|c| c.to_string()).collect()
    } else {
        (1..=n).map(|i| format!("{}{i}", pool[0])).collect()
    }
}

fn names_or_default(generators: &Option<Vec<String>>, count: usize, pool: &str) -> Result<Vec<String>> {
    match generators {
        Some(g) if g.len() != count => Err(Error::Parse(format!(
            "{} generator names for {count} generators",
            g.len()
        ))),
        Some(g) => Ok(g.clone()),
        None => Ok(default_names(pool, count)),
    }
}

/// The automorphism used when a rank-3 semidirect scenario gives none.
pub fn default_phi() -> BTreeMap<String, String> {
    [("x", "y"), ("y", "z"), ("z", "x y")]
        .into_iter()
        .map(|(a, b)| (a.to_string(), b.to_string()))
        .collect()
}

/// A merged amalgam and the generator names of its two sides.
struct Built {
    group: Group,
    parts: Vec<Vec<String>>,
}

impl GroupSpec {
    pub fn build(&self) -> Result<Group> {
        let mut g = Group::trivial();
        add_spec(&mut g, self)?;
        Ok(g)
    }
}

fn add_spec(group: &mut Group, spec: &GroupSpec) -> Result<Vec<String>> {
    match spec {
        GroupSpec::Trivial {} => Ok(Vec::new()),
        GroupSpec::FreeGroup { rank, generators } => {
            let count = rank.or(generators.as_ref().map(Vec::len)).unwrap_or(0);
            let names = names_or_default(generators, count, "xyzwuv")?;
            for n in &names {
                group.add_cyclic(n, 0)?;
            }
            Ok(names)
        }
        GroupSpec::FreeProductCyclic { orders, generators } => {
            let names = names_or_default(generators, orders.len(), "abcdefgh")?;
            for (n, &o) in names.iter().zip(orders) {
                group.add_cyclic(n, o)?;
            }
            Ok(names)
        }
        GroupSpec::SemidirectZFree {
            rank,
            generators,
            stable,
            phi,
        } => {
            let count = rank.or(generators.as_ref().map(Vec::len)).unwrap_or(3);
            let names = names_or_default(generators, count, "xyzwuv")?;
            let stable = stable.clone().unwrap_or_else(|| "t".to_string());
            let phi = match phi {
                Some(p) => p.clone(),
                None if names == ["x", "y", "z"] => default_phi(),
                None => return Err(Error::Parse("semidirect scenario needs \"phi\"".into())),
            };
            let index = |s: &str| {
                names
                    .iter()
                    .position(|n| n == s)
                    .ok_or_else(|| Error::UnknownSymbol(s.to_string()))
            };
            let mut fiber_only = Group::trivial();
            for n in &names {
                fiber_only.add_cyclic(n, 0)?;
            }
            let mut images = vec![None; count];
            for (src, img) in &phi {
                let i = index(src)?;
                let w = fiber_only.parse_word(img)?;
                images[i] = Some(w.0.iter().map(|l| (l.gen, l.exp)).collect::<Vec<_>>());
            }
            let images = images
                .into_iter()
                .enumerate()
                .map(|(i, w)| w.ok_or_else(|| Error::Parse(format!("phi has no image for {}", names[i]))))
                .collect::<Result<Vec<_>>>()?;
            let fiber: Vec<&str> = names.iter().map(String::as_str).collect();
            group.add_semidirect(&fiber, &stable, &images)?;
            Ok(names.into_iter().chain([stable]).collect())
        }
        GroupSpec::FreeProduct { factors } => {
            let mut all = Vec::new();
            for f in factors {
                all.extend(add_spec(group, f)?);
            }
            Ok(all)
        }
        GroupSpec::Amalgam { .. } => {
            let built = build_amalgam(spec)?;
            copy_group_into(group, &built.group, &BTreeMap::new())
        }
    }
}

/// Appends every factor of `src` to `dst`, except cyclic factors whose
/// generator is a key of `merged`; those names and `src`'s aliases become
/// aliases in `dst`.
fn copy_group_into(dst: &mut Group, src: &Group, merged: &BTreeMap<String, String>) -> Result<Vec<String>> {
    let mut names = Vec::new();
    for f in src.factors() {
        match f {
            Factor::Cyclic { gen, order } => {
                let name = src.name(*gen);
                if !merged.contains_key(name) {
                    dst.add_cyclic(name, *order)?;
                }
                names.push(merged.get(name).map_or(name, String::as_str).to_string());
            }
            Factor::Semidirect(s) => {
                let fiber: Vec<&str> = s.fiber.iter().map(|&g| src.name(g)).collect();
                let images: Vec<Vec<(usize, i8)>> = (0..s.rank())
                    .map(|i| {
                        s.phi(&[i as i32 + 1])
                            .iter()
                            .map(|&l| ((l.unsigned_abs() - 1) as usize, l.signum() as i8))
                            .collect()
                    })
                    .collect();
                dst.add_semidirect(&fiber, src.name(s.stable), &images)?;
                names.extend(fiber.iter().map(|s| s.to_string()));
                names.push(src.name(s.stable).to_string());
            }
        }
    }
    for (alias, target) in src.aliases() {
        dst.add_alias(alias, merged.get(target).unwrap_or(target))?;
    }
    for (from, to) in merged {
        dst.add_alias(from, to)?;
    }
    Ok(names)
}

/// Merges each identified pair into the left generator; the right name
/// becomes an alias.
fn build_amalgam(spec: &GroupSpec) -> Result<Built> {
    let GroupSpec::Amalgam {
        left,
        right,
        identifications,
    } = spec
    else {
        unreachable!("called on an amalgam");
    };
    let mut lg = Group::trivial();
    add_spec(&mut lg, left)?;
    let mut rg = Group::trivial();
    add_spec(&mut rg, right)?;
    let cyclic = |g: &Group, i: GenId| matches!(g.role(i), GenRole::Cyclic { .. });
    let mut merged: BTreeMap<String, String> = BTreeMap::new();
    for (l, r) in identifications {
        let (li, ri) = (lg.gen(l)?, rg.gen(r)?);
        if !cyclic(&lg, li) || !cyclic(&rg, ri) {
            return Err(Error::Unsupported(
                "amalgams identify cyclic free-factor generators only".into(),
            ));
        }
        if lg.order(li) != rg.order(ri) {
            return Err(Error::Unsupported(format!(
                "identified generators {l:?} and {r:?} have different orders"
            )));
        }
        let (l, r) = (lg.name(li).to_string(), rg.name(ri).to_string());
        if merged.values().any(|v| *v == l) || merged.contains_key(&r) {
            return Err(Error::Unsupported(format!(
                "generator identified twice in {l:?} ~ {r:?}"
            )));
        }
        merged.insert(r, l);
    }
    let mut group = Group::trivial();
    let left_names = copy_group_into(&mut group, &lg, &BTreeMap::new())?;
    let right_names = copy_group_into(&mut group, &rg, &merged)?;
    Ok(Built {
        group,
        parts: vec![left_names, right_names],
    })
}

/// A loaded group with its designated subgroups.
#[derive(Clone, Debug)]
pub struct GroupScenario {
    pub name: String,
    pub group: Group,
    pub subgroups: BTreeMap<String, Subgroup>,
    /// For amalgams: generator names of the left factor, the right factor
    /// (after merging) and the identified edge group.
    pub amalgam_parts: Option<AmalgamParts>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AmalgamParts {
    pub left: Vec<String>,
    pub right: Vec<String>,
    pub edge: Vec<String>,
}

impl GroupScenario {
    pub fn from_json(s: &str) -> Result<Self> {
        let file: ScenarioFile = serde_json::from_str(s)?;
        Self::from_file(&file)
    }

    pub fn from_file(file: &ScenarioFile) -> Result<Self> {
        let (mut group, amalgam_parts) = match &file.group {
            GroupSpec::Amalgam { identifications, .. } => {
                let built = build_amalgam(&file.group)?;
                let edge = identifications
                    .iter()
                    .map(|(l, _)| {
                        built
                            .group
                            .name(built.group.gen(l).expect("left generator"))
                            .to_string()
                    })
                    .collect();
                let mut parts = built.parts.into_iter();
                let left = parts.next().expect("left part");
                let right = parts.next().expect("right part");
                (built.group, Some(AmalgamParts { left, right, edge }))
            }
            spec => {
                let mut g = Group::trivial();
                add_spec(&mut g, spec)?;
                (g, None)
            }
        };
        for (alias, target) in &file.aliases {
            group.add_alias(alias, target)?;
        }
        let mut scenario = GroupScenario {
            name: file.name.clone().unwrap_or_default(),
            group,
            subgroups: BTreeMap::new(),
            amalgam_parts,
        };
        if let Some(parts) = scenario.amalgam_parts.clone() {
            for (key, names) in [("left", &parts.left), ("right", &parts.right), ("edge", &parts.edge)] {
                let sub = scenario.subgroup_from_names(key, names)?;
                scenario.subgroups.insert(key.to_string(), sub);
            }
        }
        for (name, spec) in &file.subgroups {
            let sub = scenario.resolve_subgroup(name, spec)?;
            scenario.subgroups.insert(name.clone(), sub);
        }
        Ok(scenario)
    }

    pub fn from_group(name: impl Into<String>, group: Group) -> Self {
        GroupScenario {
            name: name.into(),
            group,
            subgroups: BTreeMap::new(),
            amalgam_parts: None,
        }
    }

    pub fn subgroup_from_names(&self, name: &str, names: &[String]) -> Result<Subgroup> {
        let gens = names.iter().map(|n| self.group.gen(n)).collect::<Result<Vec<_>>>()?;
        Subgroup::generated_by(&self.group, name, &gens)
    }

    pub fn resolve_subgroup(&self, name: &str, spec: &SubgroupSpec) -> Result<Subgroup> {
        match spec {
            SubgroupSpec::Generators(names) => self.subgroup_from_names(name, names),
            SubgroupSpec::Tag(t) => match t.as_str() {
                "trivial" => Ok(Subgroup::trivial(&self.group, name)),
                "whole" => Ok(Subgroup::whole(&self.group, name)),
                "fiber" => Subgroup::fiber(&self.group, name),
                other => Err(Error::Unsupported(format!("subgroup tag {other:?}"))),
            },
        }
    }

    /// A designated subgroup, or a construction tag.
    pub fn subgroup(&self, name: &str) -> Result<Subgroup> {
        if let Some(s) = self.subgroups.get(name) {
            return Ok(s.clone());
        }
        self.resolve_subgroup(name, &SubgroupSpec::Tag(name.to_string()))
    }

    pub fn parse_word(&self, s: &str) -> Result<Word> {
        self.group.parse_word(s)
    }

    pub fn normal_form(&self, w: &Word) -> Word {
        self.group.normal_form(w)
    }

    pub fn subgroup_membership(&self, h: &Subgroup, w: &Word) -> bool {
        h.contains(&self.group.element(w))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_kinds_load() {
        let fp = GroupScenario::from_json(r#"{"kind":"free_product_cyclic","orders":[2,2]}"#).unwrap();
        assert_eq!(fp.group.generator_names(), ["a", "b"]);
        let fg = GroupScenario::from_json(r#"{"kind":"free_group","rank":2}"#).unwrap();
        assert_eq!(fg.group.generator_names(), ["x", "y"]);
        let sd =
            GroupScenario::from_json(r#"{"kind":"semidirect_z_free","rank":3,"subgroups":{"F":"fiber"}}"#).unwrap();
        assert_eq!(sd.group.generator_names(), ["x", "y", "z", "t"]);
        assert!(sd.subgroups.contains_key("F"));
        let w = sd.parse_word("t x t^-1").unwrap();
        assert_eq!(sd.group.format_word(&sd.normal_form(&w)), "y");
    }

    #[test]
    fn explicit_phi_overrides_the_default() {
        let sd = GroupScenario::from_json(
            r#"{"kind":"semidirect_z_free","generators":["p","q"],"stable":"s","phi":{"p":"q","q":"p q"}}"#,
        )
        .unwrap();
        let w = sd.parse_word("s q s^-1").unwrap();
        assert_eq!(sd.group.format_word(&sd.normal_form(&w)), "p q");
    }

    #[test]
    fn amalgam_merges_identified_generators() {
        let am = GroupScenario::from_json(
            r#"{"kind":"amalgam",
                "left":{"kind":"free_product_cyclic","orders":[2,2],"generators":["a","b"]},
                "right":{"kind":"free_product_cyclic","orders":[2,2],"generators":["c","d"]},
                "identifications":[["a","c"]]}"#,
        )
        .unwrap();
        assert_eq!(am.group.generator_names(), ["a", "b", "d"]);
        let w = am.parse_word("c a d").unwrap();
        assert_eq!(am.group.format_word(&am.normal_form(&w)), "d");
        let parts = am.amalgam_parts.as_ref().unwrap();
        assert_eq!(parts.right, ["a", "d"]);
        assert_eq!(parts.edge, ["a"]);
        assert!(am.subgroups["left"].contains(&am.group.element(&am.parse_word("a b").unwrap())));
    }

    #[test]
    fn amalgam_rejects_mismatched_orders() {
        let bad = GroupScenario::from_json(
            r#"{"kind":"amalgam",
                "left":{"kind":"free_product_cyclic","orders":[2]},
                "right":{"kind":"free_product_cyclic","orders":[3],"generators":["c"]},
                "identifications":[["a","c"]]}"#,
        );
        assert!(matches!(bad, Err(Error::Unsupported(_))));
    }

    #[test]
    fn free_product_of_semidirect_and_cyclic() {
        let s = GroupScenario::from_json(
            r#"{"kind":"free_product","factors":[{"kind":"semidirect_z_free","rank":3},
                {"kind":"free_group","generators":["d"]}]}"#,
        )
        .unwrap();
        assert_eq!(s.group.kind_label(), "free_product[semidirect_z_free(3), cyclic(inf)]");
    }

    #[test]
    fn schema_errors() {
        assert!(GroupScenario::from_json(r#"{"kind":"nope"}"#).is_err());
        assert!(
            GroupScenario::from_json(r#"{"kind":"free_product_cyclic","orders":[2],"generators":["a","b"]}"#).is_err()
        );
        let unknown = GroupScenario::from_json(r#"{"kind":"free_group","rank":1,"subgroups":{"H":["q"]}}"#);
        assert!(matches!(unknown, Err(Error::UnknownSymbol(_))));
    }
}
