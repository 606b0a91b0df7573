//! Ambiguity filtering, yes/no balancing and train/dev/test splitting.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::pair::{QAPair, Split};
use crate::text::strip_terminal_punct;

pub const DEFAULT_PRONOUNS: &[&str] = &["it", "this", "that", "these", "those", "he", "she", "they", "them", "one"];
pub const DEFAULT_GENERIC_PHRASES: &[&str] =
    &["this method", "the code", "this function", "the function", "this class"];
const ARTICLES: &[&str] = &["a", "an", "the"];

pub const DEFAULT_SEED: u64 = 13;
pub const DEFAULT_YES_RATIO: f64 = 0.5;
pub const DEFAULT_RATIOS: [usize; 3] = [8, 1, 1];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AmbiguityFilter {
    pub pronouns: BTreeSet<String>,
    pub generic_phrases: BTreeSet<String>,
}

impl Default for AmbiguityFilter {
    fn default() -> Self {
        AmbiguityFilter {
            pronouns: DEFAULT_PRONOUNS.iter().map(|s| s.to_string()).collect(),
            generic_phrases: DEFAULT_GENERIC_PHRASES.iter().map(|s| s.to_string()).collect(),
        }
    }
}

impl AmbiguityFilter {
    /// True when the answer says nothing specific: only pronouns once articles
    /// are removed, or a generic stand-in for the code itself.
    pub fn is_ambiguous(&self, answer: &str) -> bool {
        let lower = strip_terminal_punct(&answer.to_lowercase()).to_string();
        let words: Vec<&str> = lower.split_whitespace().collect();
        if self.generic_phrases.contains(&words.join(" ")) {
            return true;
        }
        let content: Vec<&&str> = words.iter().filter(|w| !ARTICLES.contains(w)).collect();
        content.iter().all(|w| self.pronouns.contains(**w))
    }
}

/// Whether a pair should be dropped as ambiguous (default lists).
pub fn filter_ambiguous(pair: &QAPair) -> bool {
    AmbiguityFilter::default().is_ambiguous(&pair.answer)
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Largest number of Yes pairs `k` with `k / (k + no) <= ratio`.
pub fn max_yes(no: usize, ratio: f64) -> usize {
    if no == 0 {
        return 0;
    }
    let mut k = (ratio * no as f64 / (1.0 - ratio)).floor() as usize;
    while k > 0 && k as f64 > ratio * (k + no) as f64 {
        k -= 1;
    }
    while (k + 1) as f64 <= ratio * (k + 1 + no) as f64 {
        k += 1;
    }
    k
}

/// Delete randomly chosen Yes pairs until the Yes share of yes/no pairs is at
/// most `ratio`. Order of the survivors is preserved.
pub fn balance_yes_no(pairs: Vec<QAPair>, ratio: f64, seed: u64) -> Result<(Vec<QAPair>, usize), Error> {
    if !(ratio > 0.0 && ratio < 1.0) {
        return Err(Error::Invalid(format!("yes ratio must lie strictly between 0 and 1, got {ratio}")));
    }
    let mut yes: Vec<usize> = pairs.iter().enumerate().filter(|(_, p)| p.is_yes()).map(|(i, _)| i).collect();
    let no = pairs.iter().filter(|p| p.is_no()).count();
    let keep = max_yes(no, ratio).min(yes.len());
    let excess = yes.len() - keep;
    if excess == 0 {
        return Ok((pairs, 0));
    }
    yes.shuffle(&mut rng(seed));
    let drop: BTreeSet<usize> = yes.into_iter().take(excess).collect();
    let kept = pairs.into_iter().enumerate().filter(|(i, _)| !drop.contains(i)).map(|(_, p)| p).collect();
    Ok((kept, excess))
}

/// Parse a ratio string such as `8:1:1`.
pub fn parse_ratios(text: &str) -> Result<[usize; 3], Error> {
    let parts: Vec<&str> = text.split(':').collect();
    let bad = || Error::Invalid(format!("split ratios must look like 8:1:1, got {text:?}"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let mut out = [0; 3];
    for (slot, p) in out.iter_mut().zip(parts) {
        *slot = p.trim().parse().map_err(|_| bad())?;
        if *slot == 0 {
            return Err(bad());
        }
    }
    Ok(out)
}

/// Split sizes in proportion to `ratios`, remainders going to the largest
/// fractional parts (earlier splits win ties).
pub fn split_sizes(n: usize, ratios: [usize; 3]) -> [usize; 3] {
    let total: usize = ratios.iter().sum();
    let mut sizes = [0; 3];
    let mut rema = [(0usize, 0usize); 3];
    for i in 0..3 {
        sizes[i] = n * ratios[i] / total;
        rema[i] = (n * ratios[i] % total, i);
    }
    let mut left = n - sizes.iter().sum::<usize>();
    rema.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    for &(_, i) in rema.iter() {
        if left == 0 {
            break;
        }
        sizes[i] += 1;
        left -= 1;
    }
    sizes
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Splits {
    pub train: Vec<QAPair>,
    pub dev: Vec<QAPair>,
    pub test: Vec<QAPair>,
}

impl Splits {
    pub fn get(&self, split: Split) -> &[QAPair] {
        match split {
            Split::Train => &self.train,
            Split::Dev => &self.dev,
            Split::Test => &self.test,
            Split::Unassigned => &[],
        }
    }

    pub fn sizes(&self) -> [usize; 3] {
        [self.train.len(), self.dev.len(), self.test.len()]
    }

    /// All pairs with their split field set, in input order of the splits.
    pub fn assigned(&self) -> Vec<QAPair> {
        self.train.iter().chain(&self.dev).chain(&self.test).cloned().collect()
    }
}

/// Shuffle with `seed` and partition into train/dev/test.
///
/// With `group_by_code`, unique code ids are shuffled instead and whole codes
/// fill train, then dev, then test up to their target sizes.
pub fn split(pairs: Vec<QAPair>, ratios: [usize; 3], seed: u64, group_by_code: bool) -> Result<Splits, Error> {
    if ratios.contains(&0) {
        return Err(Error::Invalid("split ratios must be positive".into()));
    }
    if pairs.len() < 3 {
        return Err(Error::Invalid(format!("cannot split {} pairs into 3 sets", pairs.len())));
    }
    let sizes = split_sizes(pairs.len(), ratios);
    let mut buckets: [Vec<QAPair>; 3] = Default::default();
    if group_by_code {
        let mut by_code: BTreeMap<String, Vec<QAPair>> = BTreeMap::new();
        for p in pairs {
            by_code.entry(p.code_id.clone()).or_default().push(p);
        }
        let mut codes: Vec<String> = by_code.keys().cloned().collect();
        codes.shuffle(&mut rng(seed));
        let mut b = 0;
        for code in codes {
            while b < 2 && buckets[b].len() >= sizes[b] {
                b += 1;
            }
            buckets[b].extend(by_code.remove(&code).expect("code present"));
        }
    } else {
        let mut pairs = pairs;
        pairs.shuffle(&mut rng(seed));
        let mut it = pairs.into_iter();
        for (b, &size) in sizes.iter().enumerate() {
            buckets[b].extend(it.by_ref().take(size));
        }
    }
    let [mut train, mut dev, mut test] = buckets;
    for (bucket, tag) in [(&mut train, Split::Train), (&mut dev, Split::Dev), (&mut test, Split::Test)] {
        for p in bucket.iter_mut() {
            p.split = tag;
        }
    }
    Ok(Splits { train, dev, test })
}
