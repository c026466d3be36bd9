use serde::Serialize;

use crate::error::{Error, Result};

use super::engine::{Element, Factor, GenId, Group, Syllable};

/// How a subgroup meets one free factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Selection {
    None,
    Full,
    /// The free normal subgroup of a `ℤ ⋉ F` factor.
    Fiber,
}

/// A subgroup generated by whole free factors, plus possibly the fiber of
/// semidirect factors. Membership and cosets are exact for this class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Subgroup {
    pub name: String,
    pub selection: Vec<Selection>,
}

impl Subgroup {
    pub fn trivial(group: &Group, name: impl Into<String>) -> Self {
        Subgroup {
            name: name.into(),
            selection: vec![Selection::None; group.factors().len()],
        }
    }

    pub fn whole(group: &Group, name: impl Into<String>) -> Self {
        Subgroup {
            name: name.into(),
            selection: vec![Selection::Full; group.factors().len()],
        }
    }

    /// The fiber of every semidirect factor.
    pub fn fiber(group: &Group, name: impl Into<String>) -> Result<Self> {
        let selection: Vec<_> = group
            .factors()
            .iter()
            .map(|f| match f {
                Factor::Semidirect(_) => Selection::Fiber,
                Factor::Cyclic { .. } => Selection::None,
            })
            .collect();
        if !selection.contains(&Selection::Fiber) {
            return Err(Error::Unsupported(
                "fiber subgroup of a group without a semidirect factor".into(),
            ));
        }
        Ok(Subgroup {
            name: name.into(),
            selection,
        })
    }

    /// The subgroup generated by `gens`, which must be a union of whole factors
    /// and whole fibers.
    pub fn generated_by(group: &Group, name: impl Into<String>, gens: &[GenId]) -> Result<Self> {
        let name = name.into();
        let has = |g: &GenId| gens.contains(g);
        let selection = group
            .factors()
            .iter()
            .map(|f| match f {
                Factor::Cyclic { gen, .. } => Ok(if has(gen) { Selection::Full } else { Selection::None }),
                Factor::Semidirect(s) => {
                    let fiber = s.fiber.iter().filter(|g| has(g)).count();
                    match (fiber, has(&s.stable)) {
                        (0, false) => Ok(Selection::None),
                        (n, true) if n == s.fiber.len() => Ok(Selection::Full),
                        (n, false) if n == s.fiber.len() => Ok(Selection::Fiber),
                        _ => Err(Error::Unsupported(format!(
                            "subgroup {name:?} takes part of a semidirect factor"
                        ))),
                    }
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Subgroup { name, selection })
    }

    pub fn is_trivial(&self) -> bool {
        self.selection.iter().all(|&s| s == Selection::None)
    }

    pub fn is_whole(&self) -> bool {
        self.selection.iter().all(|&s| s == Selection::Full)
    }

    /// Finite exactly when it is trivial or a single finite cyclic factor.
    pub fn is_finite(&self, group: &Group) -> bool {
        let mut finite_factors = 0;
        for (sel, f) in self.selection.iter().zip(group.factors()) {
            match sel {
                Selection::None => {}
                Selection::Full if f.is_finite() => finite_factors += 1,
                _ => return false,
            }
        }
        finite_factors <= 1
    }

    /// Factorwise intersection.
    pub fn intersect(&self, other: &Subgroup, name: impl Into<String>) -> Subgroup {
        let selection = self
            .selection
            .iter()
            .zip(&other.selection)
            .map(|(&a, &b)| match (a, b) {
                (Selection::None, _) | (_, Selection::None) => Selection::None,
                (Selection::Full, Selection::Full) => Selection::Full,
                _ => Selection::Fiber,
            })
            .collect();
        Subgroup {
            name: name.into(),
            selection,
        }
    }

    fn syllable_in(&self, s: &Syllable) -> bool {
        matches!(
            (self.selection[s.factor()], s),
            (Selection::Full, _) | (Selection::Fiber, Syllable::Twisted { shift: 0, .. })
        )
    }

    pub fn contains(&self, e: &Element) -> bool {
        e.syllables().iter().all(|s| self.syllable_in(s))
    }

    /// Canonical key of the left coset `eH`: equal keys exactly for equal cosets.
    pub fn coset_key(&self, e: &Element) -> Element {
        let mut syl = e.syllables().to_vec();
        while let Some(last) = syl.last() {
            if self.syllable_in(last) {
                syl.pop();
                continue;
            }
            if let (Selection::Fiber, Syllable::Twisted { factor, shift, fiber }) =
                (self.selection[last.factor()], last)
            {
                if !fiber.is_empty() {
                    let (factor, shift) = (*factor, *shift);
                    *syl.last_mut().expect("nonempty") = Syllable::Twisted {
                        factor,
                        shift,
                        fiber: Vec::new(),
                    };
                }
            }
            break;
        }
        Element(syl)
    }
}
