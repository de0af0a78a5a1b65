//! Rewriting in the coordinate algebra of the quantum 5-sphere, generated by
//! `z1, z2, z3` and their adjoints.
//!
//! Letters are ordered `z1 < z2 < z3 < z3* < z2* < z1*`. Every rule replaces
//! an out-of-order adjacent pair, or the pair `z3 z3*`, so normal forms read
//! `z1^a1 z2^a2 z3^a3 z3*^b3 z2*^b2 z1*^b1` with `min(a3, b3) = 0`.

mod confluence;
mod parse;
mod relations;

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::qarith::LaurentScalar;

pub use confluence::{confluence_check, ConfluenceReport, CriticalPair};
pub use parse::{parse_poly, PolyParseError};
pub use relations::{
    cp2_relations, evaluate_classical, p, projector_identities, q_trace_identity,
    random_sphere_point, verify_cp2_relations, verify_q1_cross_check, FamiliesForm, Identity,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RewriteError {
    #[error("rewriting did not terminate within {budget} steps")]
    BudgetExhausted { budget: usize },
}

/// A generator `z_i` or `z_i*`, stored by its position in the letter order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Letter(u8);

impl Letter {
    pub const Z1: Letter = Letter(0);
    pub const Z2: Letter = Letter(1);
    pub const Z3: Letter = Letter(2);
    pub const Z3S: Letter = Letter(3);
    pub const Z2S: Letter = Letter(4);
    pub const Z1S: Letter = Letter(5);
    pub const ALL: [Letter; 6] = [
        Self::Z1,
        Self::Z2,
        Self::Z3,
        Self::Z3S,
        Self::Z2S,
        Self::Z1S,
    ];

    /// `z_i` for `i` in `1..=3`.
    pub fn z(i: usize) -> Letter {
        assert!((1..=3).contains(&i));
        Letter(i as u8 - 1)
    }

    /// `z_i*` for `i` in `1..=3`.
    pub fn zs(i: usize) -> Letter {
        assert!((1..=3).contains(&i));
        Letter(6 - i as u8)
    }

    pub fn is_star(self) -> bool {
        self.0 >= 3
    }

    /// Index `i` of `z_i` or `z_i*`.
    pub fn index(self) -> usize {
        if self.is_star() {
            6 - self.0 as usize
        } else {
            self.0 as usize + 1
        }
    }

    pub fn star(self) -> Letter {
        Letter(5 - self.0)
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "z{}{}",
            self.index(),
            if self.is_star() { "*" } else { "" }
        )
    }
}

/// A word in the six letters.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize)]
pub struct NcMonomial(pub Vec<Letter>);

impl NcMonomial {
    pub fn unit() -> Self {
        Self(Vec::new())
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    /// `+1` per `z`, `-1` per `z*`.
    pub fn grade(&self) -> i32 {
        self.0
            .iter()
            .map(|l| if l.is_star() { -1 } else { 1 })
            .sum()
    }

    pub fn concat(&self, o: &NcMonomial) -> NcMonomial {
        let mut w = self.0.clone();
        w.extend_from_slice(&o.0);
        NcMonomial(w)
    }

    /// Letters in non-decreasing order and no `z3 z3*`.
    pub fn is_normal(&self) -> bool {
        self.0
            .windows(2)
            .all(|w| w[0] <= w[1] && !(w[0] == Letter::Z3 && w[1] == Letter::Z3S))
    }
}

/// Degree first, then lexicographic.
impl Ord for NcMonomial {
    fn cmp(&self, o: &Self) -> std::cmp::Ordering {
        self.0.len().cmp(&o.0.len()).then_with(|| self.0.cmp(&o.0))
    }
}

impl PartialOrd for NcMonomial {
    fn partial_cmp(&self, o: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(o))
    }
}

impl fmt::Display for NcMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.0.iter().map(Letter::to_string).collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// Grade of a monomial.
pub fn grade(m: &NcMonomial) -> i32 {
    m.grade()
}

/// A noncommutative polynomial with exact Laurent coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct NcPoly {
    terms: BTreeMap<NcMonomial, LaurentScalar>,
}

impl NcPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::scalar(LaurentScalar::one())
    }

    pub fn scalar(c: LaurentScalar) -> Self {
        Self::term(NcMonomial::unit(), c)
    }

    pub fn letter(l: Letter) -> Self {
        Self::term(NcMonomial(vec![l]), LaurentScalar::one())
    }

    pub fn monomial(m: NcMonomial) -> Self {
        Self::term(m, LaurentScalar::one())
    }

    pub fn term(m: NcMonomial, c: LaurentScalar) -> Self {
        let mut p = Self::zero();
        p.add_term(m, c);
        p
    }

    pub fn add_term(&mut self, m: NcMonomial, c: LaurentScalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += &c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&NcMonomial, &LaurentScalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn scale(&self, c: &LaurentScalar) -> NcPoly {
        let mut out = NcPoly::zero();
        for (m, x) in &self.terms {
            out.add_term(m.clone(), x * c);
        }
        out
    }

    pub fn degree(&self) -> usize {
        self.terms.keys().map(NcMonomial::degree).max().unwrap_or(0)
    }

    /// Grades present among the terms.
    pub fn grades(&self) -> Vec<i32> {
        let mut g: Vec<i32> = self.terms.keys().map(NcMonomial::grade).collect();
        g.sort_unstable();
        g.dedup();
        g
    }

    pub fn is_normal(&self) -> bool {
        self.terms.keys().all(NcMonomial::is_normal)
    }

    /// Replaces `q` by a number; the result is a commutative-evaluation
    /// helper for `q = 1`.
    pub fn eval_coefficients(&self, q: f64) -> Vec<(NcMonomial, f64)> {
        self.terms
            .iter()
            .map(|(m, c)| (m.clone(), c.eval(q)))
            .collect()
    }

    pub fn pow(&self, n: u32) -> NcPoly {
        (0..n).fold(NcPoly::one(), |acc, _| &acc * self)
    }
}

impl std::ops::Add for &NcPoly {
    type Output = NcPoly;
    fn add(self, o: &NcPoly) -> NcPoly {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl std::ops::Sub for &NcPoly {
    type Output = NcPoly;
    fn sub(self, o: &NcPoly) -> NcPoly {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl std::ops::Mul for &NcPoly {
    type Output = NcPoly;
    fn mul(self, o: &NcPoly) -> NcPoly {
        let mut out = NcPoly::zero();
        for (a, x) in &self.terms {
            for (b, y) in &o.terms {
                out.add_term(a.concat(b), x * y);
            }
        }
        out
    }
}

impl std::ops::Neg for &NcPoly {
    type Output = NcPoly;
    fn neg(self) -> NcPoly {
        self.scale(&LaurentScalar::from_integer(-1))
    }
}

impl fmt::Display for NcPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            match (c.is_one(), m.0.is_empty()) {
                (true, _) => write!(f, "{m}")?,
                (false, true) => write!(f, "({c})")?,
                (false, false) => write!(f, "({c}) {m}")?,
            }
        }
        Ok(())
    }
}

/// An oriented rule `lhs -> rhs`.
#[derive(Clone, Debug, PartialEq)]
pub struct Rule {
    pub lhs: [Letter; 2],
    pub rhs: NcPoly,
}

/// The sixteen rules of the sphere algebra.
#[derive(Clone, Debug)]
pub struct RuleSet {
    rules: HashMap<[Letter; 2], NcPoly>,
    /// Rewrites allowed per unit of `(degree + 1)²`.
    pub budget_factor: usize,
}

fn q_pow(n: i32) -> LaurentScalar {
    LaurentScalar::q_pow(n)
}

fn mono(ls: &[Letter]) -> NcMonomial {
    NcMonomial(ls.to_vec())
}

impl RuleSet {
    pub fn sphere() -> Self {
        let mut rules = HashMap::new();
        let one_minus_q2 = &LaurentScalar::one() - &q_pow(2);
        let zz = |i: usize| mono(&[Letter::z(i), Letter::zs(i)]);
        for i in 1..=3 {
            for j in (i + 1)..=3 {
                // z_j z_i = q^-1 z_i z_j
                rules.insert(
                    [Letter::z(j), Letter::z(i)],
                    NcPoly::term(mono(&[Letter::z(i), Letter::z(j)]), q_pow(-1)),
                );
                // z_i* z_j* = q^-1 z_j* z_i*
                rules.insert(
                    [Letter::zs(i), Letter::zs(j)],
                    NcPoly::term(mono(&[Letter::zs(j), Letter::zs(i)]), q_pow(-1)),
                );
            }
            for j in 1..=3 {
                if i != j {
                    // z_i* z_j = q z_j z_i*
                    rules.insert(
                        [Letter::zs(i), Letter::z(j)],
                        NcPoly::term(mono(&[Letter::z(j), Letter::zs(i)]), q_pow(1)),
                    );
                }
            }
        }
        rules.insert([Letter::Z1S, Letter::Z1], NcPoly::monomial(zz(1)));
        let mut r2 = NcPoly::monomial(zz(2));
        r2.add_term(zz(1), one_minus_q2.clone());
        rules.insert([Letter::Z2S, Letter::Z2], r2);
        // z3* z3 = z3 z3* + (1-q²)(z1z1* + z2z2*), with the sphere rule applied
        let mut r3 = NcPoly::one();
        r3.add_term(zz(1), -q_pow(2));
        r3.add_term(zz(2), -q_pow(2));
        rules.insert([Letter::Z3S, Letter::Z3], r3);
        let mut sphere = NcPoly::one();
        sphere.add_term(zz(1), LaurentScalar::from_integer(-1));
        sphere.add_term(zz(2), LaurentScalar::from_integer(-1));
        rules.insert([Letter::Z3, Letter::Z3S], sphere);
        Self {
            rules,
            budget_factor: 20_000,
        }
    }

    pub fn rules(&self) -> Vec<Rule> {
        let mut v: Vec<Rule> = self
            .rules
            .iter()
            .map(|(l, r)| Rule {
                lhs: *l,
                rhs: r.clone(),
            })
            .collect();
        v.sort_by_key(|r| r.lhs);
        v
    }

    #[cfg(test)]
    pub(crate) fn rules_mut(&mut self) -> &mut HashMap<[Letter; 2], NcPoly> {
        &mut self.rules
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn rule_for(&self, a: Letter, b: Letter) -> Option<&NcPoly> {
        self.rules.get(&[a, b])
    }

    /// Positions `i` where `w[i] w[i+1]` is a left-hand side.
    pub fn redexes(&self, w: &NcMonomial) -> Vec<usize> {
        (0..w.0.len().saturating_sub(1))
            .filter(|&i| self.rules.contains_key(&[w.0[i], w.0[i + 1]]))
            .collect()
    }

    /// One rewrite of `w` at position `i`.
    pub fn rewrite_at(&self, w: &NcMonomial, i: usize) -> NcPoly {
        let rhs = &self.rules[&[w.0[i], w.0[i + 1]]];
        let prefix = NcPoly::monomial(mono(&w.0[..i]));
        let suffix = NcPoly::monomial(mono(&w.0[i + 2..]));
        &(&prefix * rhs) * &suffix
    }

    pub fn normalizer(&self) -> Normalizer<'_> {
        Normalizer {
            rules: self,
            cache: HashMap::new(),
            steps: 0,
            budget: usize::MAX,
        }
    }

    pub fn normal_form(&self, f: &NcPoly) -> Result<NcPoly, RewriteError> {
        let d = f.degree() + 1;
        let mut n = self.normalizer();
        n.budget = self
            .budget_factor
            .saturating_mul(d * d)
            .saturating_mul(f.num_terms().max(1));
        n.normal_form(f)
    }

    /// `normal_form(lhs - rhs) == 0`.
    pub fn verify_identity(&self, lhs: &NcPoly, rhs: &NcPoly) -> Result<bool, RewriteError> {
        Ok(self.normal_form(&(lhs - rhs))?.is_zero())
    }
}

/// Leftmost-redex normalization with a memo of normal forms of words.
pub struct Normalizer<'a> {
    rules: &'a RuleSet,
    cache: HashMap<NcMonomial, NcPoly>,
    steps: usize,
    budget: usize,
}

impl Normalizer<'_> {
    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn with_budget(mut self, budget: usize) -> Self {
        self.budget = budget;
        self
    }

    pub fn normal_form(&mut self, f: &NcPoly) -> Result<NcPoly, RewriteError> {
        let mut out = NcPoly::zero();
        for (m, c) in f.terms() {
            let nf = self.word(m)?;
            for (w, x) in nf.terms() {
                out.add_term(w.clone(), x * c);
            }
        }
        Ok(out)
    }

    fn word(&mut self, m: &NcMonomial) -> Result<NcPoly, RewriteError> {
        if let Some(p) = self.cache.get(m) {
            return Ok(p.clone());
        }
        let nf = match self.rules.redexes(m).first() {
            None => NcPoly::monomial(m.clone()),
            Some(&i) => {
                self.steps += 1;
                if self.steps > self.budget {
                    return Err(RewriteError::BudgetExhausted {
                        budget: self.budget,
                    });
                }
                let once = self.rules.rewrite_at(m, i);
                self.normal_form(&once)?
            }
        };
        self.cache.insert(m.clone(), nf.clone());
        Ok(nf)
    }
}

/// Normal form under the sphere rules.
pub fn normal_form(f: &NcPoly) -> Result<NcPoly, RewriteError> {
    sphere_rules().normal_form(f)
}

/// `normal_form(lhs - rhs) == 0` under the sphere rules.
pub fn verify_identity(lhs: &NcPoly, rhs: &NcPoly) -> Result<bool, RewriteError> {
    sphere_rules().verify_identity(lhs, rhs)
}

pub fn sphere_rules() -> &'static RuleSet {
    static R: std::sync::OnceLock<RuleSet> = std::sync::OnceLock::new();
    R.get_or_init(RuleSet::sphere)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(ls: &[Letter]) -> NcPoly {
        NcPoly::monomial(mono(ls))
    }

    #[test]
    fn sixteen_rules_preserving_grade() {
        let r = RuleSet::sphere();
        assert_eq!(r.len(), 16);
        for rule in r.rules() {
            let g = mono(&rule.lhs).grade();
            assert!(rule.rhs.grades().iter().all(|&x| x == g), "{:?}", rule.lhs);
            // each rule decreases in degree-lex order
            assert!(rule.rhs.terms().all(|(m, _)| *m < mono(&rule.lhs)));
        }
    }

    #[test]
    fn examples() {
        use Letter as L;
        let nf = normal_form(&w(&[L::Z2, L::Z1])).unwrap();
        assert_eq!(nf, NcPoly::term(mono(&[L::Z1, L::Z2]), q_pow(-1)));
        assert_eq!(
            normal_form(&w(&[L::Z1S, L::Z1])).unwrap(),
            w(&[L::Z1, L::Z1S])
        );
        let sphere = &(&NcPoly::one() - &w(&[L::Z1, L::Z1S])) - &w(&[L::Z2, L::Z2S]);
        assert_eq!(normal_form(&w(&[L::Z3, L::Z3S])).unwrap(), sphere);
    }

    #[test]
    fn grades() {
        assert_eq!(grade(&mono(&[Letter::Z1])), 1);
        assert_eq!(grade(&NcMonomial::unit()), 0);
        assert_eq!(grade(&mono(&[Letter::zs(2), Letter::z(3)])), 0);
    }

    #[test]
    fn budget_is_enforced() {
        let r = RuleSet::sphere();
        let word = NcPoly::monomial(mono(
            &[Letter::Z1S; 4]
                .iter()
                .chain(&[Letter::Z3; 4])
                .copied()
                .collect::<Vec<_>>(),
        ));
        let mut n = r.normalizer().with_budget(3);
        assert!(matches!(
            n.normal_form(&word),
            Err(RewriteError::BudgetExhausted { budget: 3 })
        ));
        assert!(r.normal_form(&word).unwrap().is_normal());
    }

    #[test]
    fn letters_roundtrip() {
        for l in Letter::ALL {
            assert_eq!(l.star().star(), l);
            assert_eq!(l.star().index(), l.index());
        }
        assert_eq!(Letter::zs(1), Letter::Z1S);
        assert_eq!(Letter::z(3).to_string(), "z3");
        assert_eq!(Letter::zs(2).to_string(), "z2*");
    }
}
