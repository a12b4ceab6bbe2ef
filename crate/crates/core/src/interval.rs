use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Closed interval `[l, r]` with `l <= r`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Interval {
    pub l: Rational,
    pub r: Rational,
}

impl Interval {
    pub fn new(l: Rational, r: Rational) -> Result<Self> {
        if l > r {
            return Err(Error::BadValue(format!("[{l},{r}]")));
        }
        Ok(Interval { l, r })
    }

    pub fn from_ints(l: i64, r: i64) -> Self {
        Interval::new(l.into(), r.into()).expect("l <= r")
    }

    pub fn point(p: Rational) -> Self {
        Interval { l: p.clone(), r: p }
    }

    pub fn contains(&self, p: &Rational) -> bool {
        &self.l <= p && p <= &self.r
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.l <= other.l && other.r <= self.r
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let l = Rational::max(&self.l, &other.l);
        let r = Rational::min(&self.r, &other.r);
        (l <= r).then_some(Interval { l, r })
    }
}

/// Intersection of a non-empty family, or `None` when it is empty.
pub fn intersect_all<'a>(items: impl IntoIterator<Item = &'a Interval>) -> Option<Interval> {
    let mut it = items.into_iter();
    let mut acc = it.next()?.clone();
    for x in it {
        acc = acc.intersect(x)?;
    }
    Some(acc)
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.l, self.r)
    }
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Interval {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let raw: RawInterval = s.parse()?;
        if raw.left_open || raw.right_open {
            return Err(Error::BadValue(s.to_string()));
        }
        Interval::new(raw.l, raw.r)
    }
}

/// Interval as written in input, possibly with open ends.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawInterval {
    pub l: Rational,
    pub r: Rational,
    pub left_open: bool,
    pub right_open: bool,
}

impl RawInterval {
    pub fn closed(i: &Interval) -> Self {
        RawInterval { l: i.l.clone(), r: i.r.clone(), left_open: false, right_open: false }
    }

    pub fn is_closed(&self) -> bool {
        !self.left_open && !self.right_open
    }
}

impl FromStr for RawInterval {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let bad = || Error::BadValue(s.to_string());
        if t.len() < 2 {
            return Err(bad());
        }
        let left_open = match t.as_bytes()[0] {
            b'[' => false,
            b'(' => true,
            _ => return Err(bad()),
        };
        let right_open = match t.as_bytes()[t.len() - 1] {
            b']' => false,
            b')' => true,
            _ => return Err(bad()),
        };
        let inner = &t[1..t.len() - 1];
        let (a, b) = inner.split_once(',').ok_or_else(bad)?;
        let l: Rational = a.parse()?;
        let r: Rational = b.parse()?;
        let empty = if left_open || right_open { l >= r } else { l > r };
        if empty {
            return Err(bad());
        }
        Ok(RawInterval { l, r, left_open, right_open })
    }
}

/// `min positive gap between distinct endpoints / (4 (total + 1))`, or `1`
/// when there is at most one distinct endpoint.
pub fn epsilon<'a>(endpoints: impl IntoIterator<Item = &'a Rational>, total: usize) -> Rational {
    let mut pts: Vec<&Rational> = endpoints.into_iter().collect();
    pts.sort();
    pts.dedup();
    let gap = pts.windows(2).map(|w| w[1] - w[0]).min();
    match gap {
        Some(g) => g / Rational::from_int(4 * (total as i64 + 1)),
        None => Rational::one(),
    }
}

/// Closes open ends by shrinking them by one shared epsilon. Intersection
/// patterns among the family are unchanged.
pub fn close_all(raws: &[RawInterval]) -> Vec<Interval> {
    if raws.iter().all(RawInterval::is_closed) {
        return raws.iter().map(|x| Interval { l: x.l.clone(), r: x.r.clone() }).collect();
    }
    let eps = epsilon(raws.iter().flat_map(|x| [&x.l, &x.r]), raws.len());
    raws.iter()
        .map(|x| {
            let l = if x.left_open { &x.l + &eps } else { x.l.clone() };
            let r = if x.right_open { &x.r - &eps } else { x.r.clone() };
            Interval { l, r }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn raw(s: &str) -> RawInterval {
        s.parse().unwrap()
    }

    #[test]
    fn parses_and_rejects() {
        assert_eq!("[1,4]".parse::<Interval>().unwrap(), Interval::from_ints(1, 4));
        assert_eq!(" [ 1.5 , 2 ] ".parse::<Interval>().unwrap().l, Rational::new(3, 2));
        assert!("[4,1]".parse::<Interval>().is_err());
        assert!("(1,1]".parse::<RawInterval>().is_err());
        assert!("[1,4)".parse::<Interval>().is_err());
    }

    #[test]
    fn closing_keeps_touching_apart() {
        let xs = close_all(&[raw("[0,1)"), raw("[1,2]"), raw("(0,3)")]);
        assert!(xs[0].intersect(&xs[1]).is_none());
        assert!(xs[0].intersect(&xs[2]).is_some());
        assert!(xs[2].r < Rational::from_int(3));
        assert!(xs[2].l > Rational::zero());
    }
}
