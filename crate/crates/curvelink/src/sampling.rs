//! Random equisingularity types for property tests.
//!
//! Curves are grown as random separation trees: a node either separates its
//! branches at a free point (ordinary separation) or at a characteristic
//! window (some packages consume a characteristic term there), exactly the
//! two local shapes a real curve can have. Contacts are read off the tree
//! and converted to an intersection table, so every sample is valid by
//! construction and re-validated on assembly.

use rand::Rng;

use crate::equisingularity::{ContactPair, EquisigType};
use crate::semigroup::CharExponents;

#[derive(Clone, Copy, Debug)]
pub struct SampleLimits {
    /// Maximum number of characteristic exponents past the multiplicity.
    pub max_genus: usize,
    /// Maximum multiplicity of a branch.
    pub max_mult: i128,
}

impl Default for SampleLimits {
    fn default() -> Self {
        SampleLimits {
            max_genus: 2,
            max_mult: 6,
        }
    }
}

fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Random valid characteristic exponents within the limits.
pub fn random_chars<R: Rng>(rng: &mut R, limits: &SampleLimits) -> CharExponents {
    let mut pairs: Vec<(i128, i128)> = Vec::new();
    let mut denom = 1i128;
    // exponent floor as an exact fraction over denom
    let mut floor = (1i128, 1i128);
    let genus = rng.gen_range(0..=limits.max_genus);
    for _ in 0..genus {
        let room = limits.max_mult / denom;
        if room < 2 {
            break;
        }
        let p = rng.gen_range(2..=room.min(4));
        let grid = denom * p;
        // smallest numerator above the floor
        let mut m = (floor.0 * grid) / floor.1 + 1;
        m += rng.gen_range(0..3) as i128;
        while gcd(m, p) != 1 {
            m += 1;
        }
        pairs.push((p, m));
        denom = grid;
        floor = (m, grid);
    }
    if pairs.is_empty() {
        CharExponents::smooth()
    } else {
        crate::semigroup::chars_from_pairs(&pairs).expect("sampled pairs are valid")
    }
}

struct Prefix {
    pairs: Vec<(i128, i128)>,
    denom: i128,
    /// exponent floor as an exact fraction (num, den)
    floor: (i128, i128),
}

impl Prefix {
    /// Numerator of the last characteristic exponent on the current grid,
    /// or 0 when there is none.
    fn base(&self) -> i128 {
        match self.pairs.last() {
            None => 0,
            Some(&(_, m)) => {
                // m lives on the grid where this pair was created, which
                // for the last pair is the current grid
                m
            }
        }
    }

    /// Smallest free offset `c >= low` whose grid point exceeds the floor.
    fn min_offset(&self, low: i128) -> i128 {
        let base = self.base();
        let t = self.floor.0 * self.denom - base * self.floor.1;
        let c = if t < 0 { 1 } else { t / self.floor.1 + 1 };
        c.max(low)
    }
}

struct Gen<'a, R: Rng> {
    rng: &'a mut R,
    limits: SampleLimits,
    chars: Vec<Vec<(i128, i128)>>,
    contact: Vec<Vec<Option<ContactPair>>>,
}

impl<'a, R: Rng> Gen<'a, R> {
    fn set_contact(&mut self, xs: &[usize], ys: &[usize], cp: ContactPair) {
        for &i in xs {
            for &j in ys {
                self.contact[i][j] = Some(cp);
                self.contact[j][i] = Some(cp);
            }
        }
    }

    /// Random characteristic pair inside the window `(base + l, base + l + 1)`.
    fn window_char(&mut self, prefix: &Prefix, l: i128) -> Option<(i128, i128)> {
        let room = self.limits.max_mult / prefix.denom;
        if room < 2 || prefix.pairs.len() >= self.limits.max_genus {
            return None;
        }
        let p = self.rng.gen_range(2..=room.min(4));
        let lo = prefix.base() + l;
        let mut j = self.rng.gen_range(1..p);
        while gcd(j, p) != 1 {
            j = self.rng.gen_range(1..p);
        }
        Some((p, lo * p + j))
    }

    fn extend_leaf(&mut self, slot: usize, prefix: &mut Prefix) {
        while self.rng.gen_bool(0.4) {
            let room = self.limits.max_mult / prefix.denom;
            if room < 2 || prefix.pairs.len() >= self.limits.max_genus {
                break;
            }
            let p = self.rng.gen_range(2..=room.min(4));
            let grid = prefix.denom * p;
            let mut m = (prefix.floor.0 * grid) / prefix.floor.1 + 1;
            m += self.rng.gen_range(0..3) as i128;
            while gcd(m, p) != 1 {
                m += 1;
            }
            prefix.pairs.push((p, m));
            prefix.denom = grid;
            prefix.floor = (m, grid);
        }
        self.chars[slot] = prefix.pairs.clone();
    }

    fn node(&mut self, slots: &[usize], prefix: &mut Prefix) {
        if slots.len() == 1 {
            self.extend_leaf(slots[0], prefix);
            return;
        }
        // occasionally share more characteristic terms before separating
        while self.rng.gen_bool(0.25) {
            let l = (prefix.min_offset(1) - 1).max(if prefix.pairs.is_empty() { 1 } else { 0 });
            match self.window_char(prefix, l) {
                Some((p, m)) => {
                    prefix.pairs.push((p, m));
                    prefix.denom *= p;
                    prefix.floor = (m, prefix.denom);
                }
                None => break,
            }
        }
        // partition the slots into 2..=4 children
        let mut order: Vec<usize> = slots.to_vec();
        for i in (1..order.len()).rev() {
            let j = self.rng.gen_range(0..=i);
            order.swap(i, j);
        }
        let k = self.rng.gen_range(2..=order.len().min(4));
        let mut children: Vec<Vec<usize>> = vec![Vec::new(); k];
        for (i, slot) in order.into_iter().enumerate() {
            children[i % k].push(slot);
        }
        let q = prefix.pairs.len();
        let can_singular = self.limits.max_mult / prefix.denom >= 2 && q < self.limits.max_genus;
        let case_a = can_singular && self.rng.gen_bool(0.55);
        if !case_a {
            // ordinary separation at a free point
            let c = prefix.min_offset(1) + self.rng.gen_range(0..2) as i128;
            let cp = ContactPair::new(q, c);
            for a in 0..k {
                for b in (a + 1)..k {
                    let (xs, ys) = (children[a].clone(), children[b].clone());
                    self.set_contact(&xs, &ys, cp);
                }
            }
            let grid_point = (prefix.base() + c, prefix.denom);
            for child in &children {
                let mut p = Prefix {
                    pairs: prefix.pairs.clone(),
                    denom: prefix.denom,
                    floor: grid_point,
                };
                self.node(child, &mut p);
            }
            return;
        }
        // characteristic window: at least one package consumes a term here
        let l = (prefix.min_offset(1) - 1).max(if prefix.pairs.is_empty() { 1 } else { 0 })
            + self.rng.gen_range(0..2) as i128;
        let mut singular: Vec<Option<(i128, i128)>> = Vec::with_capacity(k);
        let twins = self.rng.gen_bool(0.3);
        let shared = self.window_char(prefix, l);
        for _ in 0..k {
            let make = self.rng.gen_bool(0.6);
            if make {
                if twins {
                    singular.push(shared);
                } else {
                    singular.push(self.window_char(prefix, l));
                }
            } else {
                singular.push(None);
            }
        }
        if singular.iter().all(Option::is_none) {
            let i = self.rng.gen_range(0..k);
            singular[i] = if twins {
                shared
            } else {
                self.window_char(prefix, l)
            };
        }
        if singular.iter().all(Option::is_none) {
            // no budget for a characteristic term after all: free separation
            let c = prefix.min_offset(1);
            let cp = ContactPair::new(q, c);
            for a in 0..k {
                for b in (a + 1)..k {
                    let (xs, ys) = (children[a].clone(), children[b].clone());
                    self.set_contact(&xs, &ys, cp);
                }
            }
            let grid_point = (prefix.base() + c, prefix.denom);
            for child in &children {
                let mut p = Prefix {
                    pairs: prefix.pairs.clone(),
                    denom: prefix.denom,
                    floor: grid_point,
                };
                self.node(child, &mut p);
            }
            return;
        }
        let boundary = ContactPair::new(q, l + 1);
        for a in 0..k {
            for b in (a + 1)..k {
                let cp = match (&singular[a], &singular[b]) {
                    (Some(x), Some(y)) if x == y => ContactPair::new(q + 1, 0),
                    _ => boundary,
                };
                let (xs, ys) = (children[a].clone(), children[b].clone());
                self.set_contact(&xs, &ys, cp);
            }
        }
        for (child, sing) in children.iter().zip(&singular) {
            let mut p = match *sing {
                Some((pw, m)) => Prefix {
                    pairs: {
                        let mut ps = prefix.pairs.clone();
                        ps.push((pw, m));
                        ps
                    },
                    denom: prefix.denom * pw,
                    floor: (m, prefix.denom * pw),
                },
                None => Prefix {
                    pairs: prefix.pairs.clone(),
                    denom: prefix.denom,
                    floor: (prefix.base() + l + 1, prefix.denom),
                },
            };
            self.node(child, &mut p);
        }
    }
}

/// Random valid equisingularity type with `r` branches.
pub fn random_curve<R: Rng>(rng: &mut R, r: usize, limits: &SampleLimits) -> EquisigType {
    assert!(r >= 1);
    if r == 1 {
        return EquisigType::single(random_chars(rng, limits));
    }
    let mut gen = Gen {
        rng,
        limits: *limits,
        chars: vec![Vec::new(); r],
        contact: vec![vec![None; r]; r],
    };
    let slots: Vec<usize> = (0..r).collect();
    let mut prefix = Prefix {
        pairs: Vec::new(),
        denom: 1,
        floor: (0, 1),
    };
    gen.node(&slots, &mut prefix);
    let chars: Vec<CharExponents> = gen
        .chars
        .iter()
        .map(|pairs| {
            if pairs.is_empty() {
                CharExponents::smooth()
            } else {
                crate::semigroup::chars_from_pairs(pairs).expect("sampled pairs are valid")
            }
        })
        .collect();
    let branches: Vec<_> = chars.iter().map(crate::semigroup::gens_from_char).collect();
    let mut entries = Vec::new();
    for i in 0..r {
        for j in (i + 1)..r {
            let cp = gen.contact[i][j].expect("contact assigned");
            let m =
                crate::equisingularity::intersection_from_contact(&branches[i], &branches[j], cp)
                    .expect("sampled contact attainable");
            entries.push((i, j, m));
        }
    }
    EquisigType::from_intersections(chars, &entries).expect("sampled curve is valid")
}
