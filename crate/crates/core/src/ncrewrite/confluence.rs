use std::fmt;

use super::{Letter, NcMonomial, NcPoly, RewriteError, RuleSet};

/// A word whose one-step reducts at two positions have different normal
/// forms.
#[derive(Clone, Debug, PartialEq)]
pub struct CriticalPair {
    pub word: NcMonomial,
    pub positions: (usize, usize),
    pub left: NcPoly,
    pub right: NcPoly,
}

impl fmt::Display for CriticalPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} at {:?}: {} vs {}",
            self.word, self.positions, self.left, self.right
        )
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ConfluenceReport {
    pub max_deg: usize,
    /// Words with at least two overlapping redexes.
    pub overlaps: usize,
    /// Reduct pairs compared, overlapping or not.
    pub pairs: usize,
    pub failures: Vec<CriticalPair>,
}

impl ConfluenceReport {
    pub fn is_confluent(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for ConfluenceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "words up to degree {}: {} overlaps, {} reduct pairs, {} not joinable",
            self.max_deg,
            self.overlaps,
            self.pairs,
            self.failures.len()
        )?;
        for p in &self.failures {
            writeln!(f, "  {p}")?;
        }
        Ok(())
    }
}

fn words(len: usize) -> impl Iterator<Item = NcMonomial> {
    (0..6usize.pow(len as u32)).map(move |mut code| {
        let mut w = Vec::with_capacity(len);
        for _ in 0..len {
            w.push(Letter::ALL[code % 6]);
            code /= 6;
        }
        NcMonomial(w)
    })
}

/// Every word of length `2..=max_deg` with two or more redexes: all one-step
/// reducts must share a normal form.
pub fn confluence_check(rules: &RuleSet, max_deg: usize) -> Result<ConfluenceReport, RewriteError> {
    let mut n = rules.normalizer();
    let mut rep = ConfluenceReport {
        max_deg,
        ..Default::default()
    };
    for len in 2..=max_deg {
        for w in words(len) {
            let red = rules.redexes(&w);
            if red.len() < 2 {
                continue;
            }
            if red.windows(2).any(|x| x[1] == x[0] + 1) {
                rep.overlaps += 1;
            }
            let nfs = red
                .iter()
                .map(|&i| n.normal_form(&rules.rewrite_at(&w, i)))
                .collect::<Result<Vec<_>, _>>()?;
            for k in 1..nfs.len() {
                rep.pairs += 1;
                if nfs[k] != nfs[0] {
                    rep.failures.push(CriticalPair {
                        word: w.clone(),
                        positions: (red[0], red[k]),
                        left: nfs[0].clone(),
                        right: nfs[k].clone(),
                    });
                }
            }
        }
    }
    Ok(rep)
}
