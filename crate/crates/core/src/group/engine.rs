use std::collections::{BTreeMap, HashSet};
use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};

pub type GenId = usize;

/// One generator or inverse generator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Letter {
    pub gen: GenId,
    pub exp: i8,
}

impl Letter {
    pub fn inverse(self) -> Letter {
        Letter {
            gen: self.gen,
            exp: -self.exp,
        }
    }
}

/// A word in the generators; ordered letter by letter on `(gen, exp)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    pub fn concat(&self, other: &Word) -> Word {
        Word(self.0.iter().chain(&other.0).copied().collect())
    }
}

/// Reduced word over a free basis; letter `i + 1` is basis element `i`,
/// `-(i + 1)` its inverse.
pub(crate) type FreeWord = Vec<i32>;

fn free_push(w: &mut FreeWord, l: i32) {
    if w.last() == Some(&-l) {
        w.pop();
    } else {
        w.push(l);
    }
}

fn substitute(images: &[FreeWord], w: &[i32]) -> FreeWord {
    let mut out = Vec::with_capacity(w.len() * 2);
    for &l in w {
        let img = &images[(l.unsigned_abs() - 1) as usize];
        if l > 0 {
            for &m in img {
                free_push(&mut out, m);
            }
        } else {
            for &m in img.iter().rev() {
                free_push(&mut out, -m);
            }
        }
    }
    out
}

/// Radius of the reduced-word search that inverts the automorphism on generators.
pub const PHI_INVERSE_RADIUS: usize = 6;
/// Radius of the injectivity scan run on the automorphism at load.
pub const PHI_INJECTIVITY_RADIUS: usize = 3;

/// `ℤ ⋉ F` with stable letter `t` acting by `t w t⁻¹ = φ(w)`.
#[derive(Clone, Debug)]
pub struct Semidirect {
    pub fiber: Vec<GenId>,
    pub stable: GenId,
    phi: Vec<FreeWord>,
    phi_inv: Vec<FreeWord>,
}

impl Semidirect {
    pub fn rank(&self) -> usize {
        self.fiber.len()
    }

    pub(crate) fn phi(&self, w: &[i32]) -> FreeWord {
        substitute(&self.phi, w)
    }

    pub(crate) fn phi_inv(&self, w: &[i32]) -> FreeWord {
        substitute(&self.phi_inv, w)
    }

    /// `φ^k(w)` for `k ≥ 0`.
    pub(crate) fn phi_power(&self, w: &[i32], k: u32) -> FreeWord {
        let mut out = w.to_vec();
        for _ in 0..k {
            out = self.phi(&out);
        }
        out
    }
}

#[derive(Clone, Debug)]
pub enum Factor {
    /// Cyclic of the given order; 0 means infinite.
    Cyclic {
        gen: GenId,
        order: u32,
    },
    Semidirect(Semidirect),
}

impl Factor {
    pub fn is_finite(&self) -> bool {
        matches!(self, Factor::Cyclic { order, .. } if *order > 0)
    }

    pub fn generators(&self) -> Vec<GenId> {
        match self {
            Factor::Cyclic { gen, .. } => vec![*gen],
            Factor::Semidirect(s) => s.fiber.iter().copied().chain([s.stable]).collect(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GenRole {
    Cyclic { factor: usize, order: u32 },
    Fiber { factor: usize, index: usize },
    Stable { factor: usize },
}

impl GenRole {
    pub fn factor(self) -> usize {
        match self {
            GenRole::Cyclic { factor, .. } | GenRole::Fiber { factor, .. } | GenRole::Stable { factor } => factor,
        }
    }
}

/// One syllable of a free-product normal form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Syllable {
    /// Nonzero power of a cyclic factor's generator, reduced into `(−m/2, m/2]`.
    Power { factor: usize, exp: i64 },
    /// `t^shift · u` in a semidirect factor, `u` freely reduced; never both trivial.
    Twisted { factor: usize, shift: i64, fiber: FreeWord },
}

impl Syllable {
    pub fn factor(&self) -> usize {
        match self {
            Syllable::Power { factor, .. } | Syllable::Twisted { factor, .. } => *factor,
        }
    }
}

/// A group element in normal form: syllables from pairwise-adjacent distinct factors.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Element(pub(crate) Vec<Syllable>);

impl Element {
    pub fn identity() -> Self {
        Element(Vec::new())
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }

    pub fn syllables(&self) -> &[Syllable] {
        &self.0
    }

    /// Number of syllables.
    pub fn syllable_length(&self) -> usize {
        self.0.len()
    }
}

fn reduce_exp(exp: i64, order: u32) -> i64 {
    if order == 0 {
        return exp;
    }
    let m = i64::from(order);
    let r = exp.rem_euclid(m);
    if 2 * r > m {
        r - m
    } else {
        r
    }
}

/// A free product of cyclic groups and `ℤ ⋉ Fₙ` factors, with named generators.
#[derive(Clone, Debug, Default)]
pub struct Group {
    names: Vec<String>,
    lookup: BTreeMap<String, GenId>,
    aliases: BTreeMap<String, String>,
    factors: Vec<Factor>,
    roles: Vec<GenRole>,
}

impl Group {
    /// The trivial group.
    pub fn trivial() -> Self {
        Group::default()
    }

    fn new_name(&mut self, name: &str) -> Result<GenId> {
        if name.is_empty() || name.contains(|c: char| c.is_whitespace() || c == '^') {
            return Err(Error::Parse(format!("invalid generator name {name:?}")));
        }
        if self.lookup.contains_key(name) {
            return Err(Error::Parse(format!("duplicate generator name {name:?}")));
        }
        let id = self.names.len();
        self.names.push(name.to_string());
        self.lookup.insert(name.to_string(), id);
        Ok(id)
    }

    pub fn add_cyclic(&mut self, name: &str, order: u32) -> Result<usize> {
        if order == 1 {
            return Err(Error::InvalidArgument(format!("generator {name:?} of order 1")));
        }
        let gen = self.new_name(name)?;
        let factor = self.factors.len();
        self.factors.push(Factor::Cyclic { gen, order });
        self.roles.push(GenRole::Cyclic { factor, order });
        Ok(factor)
    }

    /// Adds a `ℤ ⋉ F` factor; `phi[i]` is the image of `fiber[i]` as a list of
    /// `(fiber index, ±1)` letters.
    pub fn add_semidirect(&mut self, fiber: &[&str], stable: &str, phi: &[Vec<(usize, i8)>]) -> Result<usize> {
        if fiber.is_empty() {
            return Err(Error::InvalidArgument(
                "semidirect factor needs a fiber generator".into(),
            ));
        }
        if phi.len() != fiber.len() {
            return Err(Error::InvalidArgument(format!(
                "automorphism has {} images for {} generators",
                phi.len(),
                fiber.len()
            )));
        }
        let rank = fiber.len();
        let mut images = Vec::with_capacity(rank);
        for (i, img) in phi.iter().enumerate() {
            let mut w = FreeWord::new();
            for &(j, e) in img {
                if j >= rank || e.abs() != 1 {
                    return Err(Error::InvalidArgument(format!("bad letter in image of {}", fiber[i])));
                }
                free_push(&mut w, (j as i32 + 1) * i32::from(e));
            }
            if w.is_empty() {
                return Err(Error::InvalidArgument(format!(
                    "automorphism sends {} to the identity",
                    fiber[i]
                )));
            }
            images.push(w);
        }
        check_injective(&images, fiber)?;
        let phi_inv = invert_on_generators(&images, fiber)?;
        let factor = self.factors.len();
        let fiber_ids = fiber
            .iter()
            .enumerate()
            .map(|(index, f)| {
                let id = self.new_name(f)?;
                self.roles.push(GenRole::Fiber { factor, index });
                Ok(id)
            })
            .collect::<Result<Vec<_>>>()?;
        let stable_id = self.new_name(stable)?;
        self.roles.push(GenRole::Stable { factor });
        self.factors.push(Factor::Semidirect(Semidirect {
            fiber: fiber_ids,
            stable: stable_id,
            phi: images,
            phi_inv,
        }));
        Ok(factor)
    }

    /// Makes `alias` parse as `target`.
    pub fn add_alias(&mut self, alias: &str, target: &str) -> Result<()> {
        let id = self.gen(target)?;
        if self.lookup.contains_key(alias) {
            return Err(Error::Parse(format!("alias {alias:?} shadows an existing symbol")));
        }
        self.lookup.insert(alias.to_string(), id);
        self.aliases.insert(alias.to_string(), target.to_string());
        Ok(())
    }

    pub fn gen(&self, name: &str) -> Result<GenId> {
        self.lookup
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownSymbol(name.to_string()))
    }

    pub fn generator_count(&self) -> usize {
        self.names.len()
    }

    pub fn generator_names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, g: GenId) -> &str {
        &self.names[g]
    }

    pub fn aliases(&self) -> &BTreeMap<String, String> {
        &self.aliases
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn role(&self, g: GenId) -> GenRole {
        self.roles[g]
    }

    /// Generator order; 0 for infinite order.
    pub fn order(&self, g: GenId) -> u32 {
        match self.roles[g] {
            GenRole::Cyclic { order, .. } => order,
            _ => 0,
        }
    }

    /// Short structural description, e.g. `free_product[cyclic(2), semidirect_z_free(3)]`.
    pub fn kind_label(&self) -> String {
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|f| match f {
                Factor::Cyclic { order: 0, .. } => "cyclic(inf)".to_string(),
                Factor::Cyclic { order, .. } => format!("cyclic({order})"),
                Factor::Semidirect(s) => format!("semidirect_z_free({})", s.rank()),
            })
            .collect();
        format!("free_product[{}]", parts.join(", "))
    }

    /// Least common multiple of the finite factor orders; every torsion element
    /// is killed by it.
    pub fn torsion_exponent(&self) -> i64 {
        self.factors.iter().fold(1i64, |acc, f| match f {
            Factor::Cyclic { order, .. } if *order > 0 => num_integer::lcm(acc, i64::from(*order)),
            _ => acc,
        })
    }

    pub fn semidirect(&self, factor: usize) -> Option<&Semidirect> {
        match &self.factors[factor] {
            Factor::Semidirect(s) => Some(s),
            _ => None,
        }
    }

    /// Right-multiplies `e` by `gen^exp` in place.
    pub fn mul_gen(&self, e: &mut Element, gen: GenId, exp: i64) {
        if exp == 0 {
            return;
        }
        let role = self.roles[gen];
        let factor = role.factor();
        let fresh = match e.0.last() {
            Some(s) => s.factor() != factor,
            None => true,
        };
        if fresh {
            e.0.push(match role {
                GenRole::Cyclic { .. } => Syllable::Power { factor, exp: 0 },
                _ => Syllable::Twisted {
                    factor,
                    shift: 0,
                    fiber: Vec::new(),
                },
            });
        }
        let last = e.0.last_mut().expect("syllable present");
        let trivial = match (last, role) {
            (Syllable::Power { exp: cur, .. }, GenRole::Cyclic { order, .. }) => {
                *cur = reduce_exp(*cur + exp, order);
                *cur == 0
            }
            (Syllable::Twisted { shift, fiber, .. }, GenRole::Fiber { index, .. }) => {
                let l = (index as i32 + 1) * exp.signum() as i32;
                for _ in 0..exp.unsigned_abs() {
                    free_push(fiber, l);
                }
                *shift == 0 && fiber.is_empty()
            }
            (Syllable::Twisted { shift, fiber, .. }, GenRole::Stable { .. }) => {
                let s = match &self.factors[factor] {
                    Factor::Semidirect(s) => s,
                    Factor::Cyclic { .. } => unreachable!("stable letter of a cyclic factor"),
                };
                // u·t = t·φ⁻¹(u) and u·t⁻¹ = t⁻¹·φ(u)
                for _ in 0..exp.unsigned_abs() {
                    *fiber = if exp > 0 { s.phi_inv(fiber) } else { s.phi(fiber) };
                }
                *shift += exp;
                *shift == 0 && fiber.is_empty()
            }
            _ => unreachable!("syllable kind matches generator role"),
        };
        if trivial {
            e.0.pop();
        }
    }

    pub fn mul_letter(&self, e: &mut Element, l: Letter) {
        self.mul_gen(e, l.gen, i64::from(l.exp));
    }

    pub fn element(&self, w: &Word) -> Element {
        let mut e = Element::identity();
        for &l in &w.0 {
            self.mul_letter(&mut e, l);
        }
        e
    }

    /// Canonical spelling of `e` as a word of ±1 letters.
    pub fn word(&self, e: &Element) -> Word {
        let mut out = Vec::new();
        for s in &e.0 {
            match s {
                Syllable::Power { factor, exp } => {
                    let gen = match &self.factors[*factor] {
                        Factor::Cyclic { gen, .. } => *gen,
                        Factor::Semidirect(_) => unreachable!("power syllable of a cyclic factor"),
                    };
                    let l = Letter {
                        gen,
                        exp: exp.signum() as i8,
                    };
                    out.extend(std::iter::repeat_n(l, exp.unsigned_abs() as usize));
                }
                Syllable::Twisted { factor, shift, fiber } => {
                    let sd = self
                        .semidirect(*factor)
                        .expect("twisted syllable of a semidirect factor");
                    let t = Letter {
                        gen: sd.stable,
                        exp: shift.signum() as i8,
                    };
                    out.extend(std::iter::repeat_n(t, shift.unsigned_abs() as usize));
                    out.extend(fiber.iter().map(|&l| Letter {
                        gen: sd.fiber[(l.unsigned_abs() - 1) as usize],
                        exp: l.signum() as i8,
                    }));
                }
            }
        }
        Word(out)
    }

    pub fn normal_form(&self, w: &Word) -> Word {
        self.word(&self.element(w))
    }

    pub fn mul(&self, a: &Element, b: &Element) -> Element {
        let mut out = a.clone();
        for l in self.word(b).0 {
            self.mul_letter(&mut out, l);
        }
        out
    }

    pub fn inverse(&self, a: &Element) -> Element {
        self.element(&self.word(a).inverse())
    }

    /// `g⁻¹ h g`.
    pub fn conjugate(&self, h: &Element, g: &Element) -> Element {
        self.mul(&self.mul(&self.inverse(g), h), g)
    }

    pub fn pow(&self, a: &Element, k: u32) -> Element {
        let w = self.word(a);
        let mut out = Element::identity();
        for _ in 0..k {
            for &l in &w.0 {
                self.mul_letter(&mut out, l);
            }
        }
        out
    }

    pub fn has_finite_order(&self, a: &Element) -> bool {
        let m = self.torsion_exponent();
        m > 1 && self.pow(a, m as u32).is_identity()
    }

    /// Parses whitespace-separated tokens; inside a token, symbols are matched
    /// longest first and may carry `^k`, `^-1` or `⁻¹`. `1` is the identity.
    pub fn parse_word(&self, s: &str) -> Result<Word> {
        let mut out = Vec::new();
        for token in s.split_whitespace() {
            if token == "1" {
                continue;
            }
            let mut rest = token;
            while !rest.is_empty() {
                let (len, gen) = self
                    .lookup
                    .iter()
                    .filter(|(name, _)| rest.starts_with(name.as_str()))
                    .map(|(name, &g)| (name.len(), g))
                    .max()
                    .ok_or_else(|| Error::UnknownSymbol(rest.to_string()))?;
                rest = &rest[len..];
                let mut exp: i64 = 1;
                if let Some(r) = rest.strip_prefix("⁻¹") {
                    exp = -1;
                    rest = r;
                } else if let Some(r) = rest.strip_prefix('^') {
                    let r = r.strip_prefix('{').unwrap_or(r);
                    let digits = r
                        .char_indices()
                        .take_while(|&(i, c)| c.is_ascii_digit() || (i == 0 && (c == '-' || c == '+')))
                        .count();
                    exp = r[..digits]
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad exponent in {token:?}")))?;
                    rest = &r[digits..];
                    rest = rest.strip_prefix('}').unwrap_or(rest);
                }
                let l = Letter {
                    gen,
                    exp: exp.signum() as i8,
                };
                out.extend(std::iter::repeat_n(l, exp.unsigned_abs() as usize));
            }
        }
        Ok(Word(out))
    }

    /// Space-separated letters with runs folded into `^k`; the identity is `1`.
    pub fn format_word(&self, w: &Word) -> String {
        if w.is_empty() {
            return "1".to_string();
        }
        let mut out = String::new();
        let mut i = 0;
        while i < w.0.len() {
            let l = w.0[i];
            let run = w.0[i..].iter().take_while(|&&m| m == l).count();
            if !out.is_empty() {
                out.push(' ');
            }
            out.push_str(&self.names[l.gen]);
            let exp = run as i64 * i64::from(l.exp);
            if exp != 1 {
                let _ = write!(out, "^{exp}");
            }
            i += run;
        }
        out
    }

    pub fn format_element(&self, e: &Element) -> String {
        self.format_word(&self.word(e))
    }
}

/// Reduced words over `rank` letters of length exactly `len`.
fn reduced_words_of_length(rank: usize, len: usize) -> Vec<FreeWord> {
    let letters: Vec<i32> = (1..=rank as i32).flat_map(|i| [i, -i]).collect();
    let mut layer = vec![FreeWord::new()];
    for _ in 0..len {
        let mut next = Vec::new();
        for w in &layer {
            for &l in &letters {
                if w.last() != Some(&-l) {
                    let mut v = w.clone();
                    v.push(l);
                    next.push(v);
                }
            }
        }
        layer = next;
    }
    layer
}

fn check_injective(images: &[FreeWord], names: &[&str]) -> Result<()> {
    let mut seen = HashSet::new();
    for len in 0..=PHI_INJECTIVITY_RADIUS {
        for w in reduced_words_of_length(images.len(), len) {
            if !seen.insert(substitute(images, &w)) {
                return Err(Error::InvalidArgument(format!(
                    "automorphism on {names:?} is not injective on the radius-{PHI_INJECTIVITY_RADIUS} ball"
                )));
            }
        }
    }
    Ok(())
}

/// Finds `φ⁻¹` of every basis letter among reduced words of length at most
/// [`PHI_INVERSE_RADIUS`]; the inverse on longer words follows homomorphically.
fn invert_on_generators(images: &[FreeWord], names: &[&str]) -> Result<Vec<FreeWord>> {
    let rank = images.len();
    let mut inv: Vec<Option<FreeWord>> = vec![None; rank];
    'search: for len in 1..=PHI_INVERSE_RADIUS {
        for w in reduced_words_of_length(rank, len) {
            let img = substitute(images, &w);
            if img.len() == 1 && img[0] > 0 {
                let i = (img[0] - 1) as usize;
                if inv[i].is_none() {
                    inv[i] = Some(w);
                }
            }
            if inv.iter().all(Option::is_some) {
                break 'search;
            }
        }
    }
    inv.into_iter()
        .enumerate()
        .map(|(i, w)| {
            w.ok_or_else(|| Error::PhiInverse {
                radius: PHI_INVERSE_RADIUS,
                detail: format!("no preimage of {}", names[i]),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn dihedral() -> Group {
        let mut g = Group::trivial();
        g.add_cyclic("a", 2).unwrap();
        g.add_cyclic("b", 2).unwrap();
        g
    }

    fn tribonacci() -> Group {
        let mut g = Group::trivial();
        g.add_semidirect(
            &["x", "y", "z"],
            "t",
            &[vec![(1, 1)], vec![(2, 1)], vec![(0, 1), (1, 1)]],
        )
        .unwrap();
        g
    }

    fn nf(g: &Group, s: &str) -> String {
        g.format_word(&g.normal_form(&g.parse_word(s).unwrap()))
    }

    #[test]
    fn involutions_cancel() {
        assert_eq!(nf(&dihedral(), "a a b"), "b");
        assert_eq!(nf(&dihedral(), "a b b a"), "1");
        assert_eq!(nf(&dihedral(), "a^-1 b^3"), "a b");
    }

    #[test]
    fn free_reduction() {
        let mut g = Group::trivial();
        g.add_cyclic("x", 0).unwrap();
        g.add_cyclic("y", 0).unwrap();
        assert_eq!(nf(&g, "x y y⁻¹"), "x");
        assert_eq!(nf(&g, "x^2 y x^-2"), "x^2 y x^-2");
        assert_eq!(nf(&g, "xyx"), "x y x");
    }

    #[test]
    fn cyclic_exponents_are_balanced() {
        let mut g = Group::trivial();
        g.add_cyclic("r", 5).unwrap();
        assert_eq!(nf(&g, "r^3"), "r^-2");
        assert_eq!(nf(&g, "r^-3"), "r^2");
        let mut g = Group::trivial();
        g.add_cyclic("s", 4).unwrap();
        assert_eq!(nf(&g, "s^-2"), "s^2");
    }

    #[test]
    fn conjugation_by_the_stable_letter_applies_the_automorphism() {
        let g = tribonacci();
        assert_eq!(nf(&g, "t x t⁻¹"), "y");
        assert_eq!(nf(&g, "t z t^-1"), "x y");
        assert_eq!(nf(&g, "t^-1 y t"), "x");
        // φ⁻¹(x) = z x⁻¹ since φ(z x⁻¹) = x y y⁻¹
        assert_eq!(nf(&g, "t^-1 x t"), "z x^-1");
        assert_eq!(nf(&g, "x t"), "t z x^-1");
        assert_eq!(nf(&g, "t x"), "t x");
    }

    #[test]
    fn automorphism_checks_run_at_load() {
        let mut g = Group::trivial();
        let collapse = g.add_semidirect(&["x", "y"], "t", &[vec![(0, 1)], vec![(0, 1)]]);
        assert!(collapse.is_err());
        let mut g = Group::trivial();
        let trivial_image = g.add_semidirect(&["x"], "t", &[vec![(0, 1), (0, -1)]]);
        assert!(trivial_image.is_err());
        // x ↦ x², injective but not onto: no preimage of x exists.
        let mut g = Group::trivial();
        let not_onto = g.add_semidirect(&["x"], "t", &[vec![(0, 1), (0, 1)]]);
        assert!(matches!(not_onto, Err(Error::PhiInverse { .. })));
    }

    #[test]
    fn parse_errors() {
        let g = dihedral();
        assert!(matches!(g.parse_word("a q"), Err(Error::UnknownSymbol(_))));
        assert!(g.parse_word("a^x").is_err());
        assert_eq!(g.parse_word("").unwrap(), Word::default());
        assert_eq!(g.parse_word("1").unwrap(), Word::default());
    }

    #[test]
    fn aliases_parse_to_their_target() {
        let mut g = dihedral();
        g.add_alias("c", "a").unwrap();
        assert_eq!(nf(&g, "c a b"), "b");
        assert!(g.add_alias("b", "a").is_err());
    }

    #[test]
    fn longest_symbol_wins() {
        let mut g = Group::trivial();
        g.add_cyclic("t", 0).unwrap();
        g.add_cyclic("t1", 0).unwrap();
        let w = g.parse_word("t1t").unwrap();
        assert_eq!(g.format_word(&w), "t1 t");
    }

    #[test]
    fn torsion_detection() {
        let g = dihedral();
        let ab = g.element(&g.parse_word("a b").unwrap());
        let aba = g.element(&g.parse_word("a b a").unwrap());
        assert!(!g.has_finite_order(&ab));
        assert!(g.has_finite_order(&aba));
        assert!(!tribonacci().has_finite_order(&tribonacci().element(&Word(vec![Letter { gen: 0, exp: 1 }]))));
    }

    #[test]
    fn inverse_and_conjugate() {
        let g = tribonacci();
        let a = g.element(&g.parse_word("t x y^-1 t z").unwrap());
        assert!(g.mul(&a, &g.inverse(&a)).is_identity());
        let x = g.element(&g.parse_word("x").unwrap());
        let t_inv = g.element(&g.parse_word("t^-1").unwrap());
        assert_eq!(g.format_element(&g.conjugate(&x, &t_inv)), "y");
    }
}
