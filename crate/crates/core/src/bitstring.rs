use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Binary string of length at most [`Bitstring::MAX_LEN`], packed into one
/// word behind a leading marker bit. The empty string is the tree root.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Bitstring(u64);

impl Bitstring {
    pub const MAX_LEN: usize = 63;

    pub const EMPTY: Bitstring = Bitstring(1);

    /// The low `len` bits of `bits`, most significant first.
    pub fn new(bits: u64, len: usize) -> Self {
        assert!(len <= Self::MAX_LEN, "bitstring longer than {}", Self::MAX_LEN);
        let mask = if len == 0 { 0 } else { u64::MAX >> (64 - len) };
        Bitstring((1u64 << len) | (bits & mask))
    }

    pub fn len(self) -> usize {
        63 - self.0.leading_zeros() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 1
    }

    /// Payload bits without the marker.
    pub fn bits(self) -> u64 {
        self.0 ^ (1u64 << self.len())
    }

    pub fn bit(self, i: usize) -> bool {
        let n = self.len();
        assert!(i < n);
        (self.0 >> (n - 1 - i)) & 1 == 1
    }

    pub fn child(self, bit: bool) -> Self {
        assert!(self.len() < Self::MAX_LEN);
        Bitstring((self.0 << 1) | bit as u64)
    }

    pub fn parent(self) -> Option<Self> {
        (!self.is_empty()).then_some(Bitstring(self.0 >> 1))
    }

    pub fn prefix(self, len: usize) -> Self {
        let n = self.len();
        assert!(len <= n);
        Bitstring(self.0 >> (n - len))
    }

    pub fn is_prefix_of(self, other: Bitstring) -> bool {
        let (a, b) = (self.len(), other.len());
        a <= b && other.prefix(a) == self
    }

    /// Suffix left after removing the first `len` bits.
    pub fn suffix_from(self, len: usize) -> Self {
        let n = self.len();
        assert!(len <= n);
        Bitstring::new(self.bits(), n - len)
    }

    pub fn concat(self, other: Bitstring) -> Self {
        let m = other.len();
        assert!(self.len() + m <= Self::MAX_LEN);
        Bitstring((self.0 << m) | other.bits())
    }

    /// All prefixes, root first, ending with `self`.
    pub fn ancestors(self) -> impl Iterator<Item = Bitstring> {
        let n = self.len();
        (0..=n).map(move |k| self.prefix(k))
    }

    pub fn strict_ancestors(self) -> impl Iterator<Item = Bitstring> {
        let n = self.len();
        (0..n).map(move |k| self.prefix(k))
    }

    /// Position of `self` among the nodes at its depth, left to right.
    pub fn index(self) -> u64 {
        self.bits()
    }
}

/// Every way to write `b` as `b1 ∘ … ∘ bi` with possibly empty parts, in
/// lexicographic order of the cut positions.
pub fn bitstring_splits(b: Bitstring, i: usize) -> Vec<Vec<Bitstring>> {
    assert!(i >= 1);
    let n = b.len();
    let mut out = Vec::new();
    let mut cuts = vec![0usize; i - 1];
    fn rec(b: Bitstring, n: usize, cuts: &mut Vec<usize>, pos: usize, lo: usize, out: &mut Vec<Vec<Bitstring>>) {
        if pos == cuts.len() {
            let mut parts = Vec::with_capacity(cuts.len() + 1);
            let mut prev = 0;
            for &c in cuts.iter().chain(std::iter::once(&n)) {
                parts.push(b.prefix(c).suffix_from(prev));
                prev = c;
            }
            out.push(parts);
            return;
        }
        for c in lo..=n {
            cuts[pos] = c;
            rec(b, n, cuts, pos + 1, c, out);
        }
    }
    rec(b, n, &mut cuts, 0, 0, &mut out);
    out
}

/// `C(n, k)` saturating at `u128::MAX`.
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for j in 0..k {
        acc = acc.saturating_mul((n - j) as u128) / (j + 1) as u128;
    }
    acc
}

impl fmt::Display for Bitstring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("ε");
        }
        for i in 0..self.len() {
            f.write_str(if self.bit(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Bitstring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{}\"", self.to_bits_string())
    }
}

impl Bitstring {
    /// `0`/`1` characters; the empty string for the root.
    pub fn to_bits_string(self) -> String {
        if self.is_empty() {
            String::new()
        } else {
            self.to_string()
        }
    }
}

impl PartialOrd for Bitstring {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Bitstring {
    /// Lexicographic order on strings.
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        let (a, b) = (self.len(), other.len());
        let m = a.min(b);
        self.prefix(m).0.cmp(&other.prefix(m).0).then(a.cmp(&b))
    }
}

impl FromStr for Bitstring {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t == "ε" {
            return Ok(Bitstring::EMPTY);
        }
        if t.len() > Self::MAX_LEN || !t.bytes().all(|c| c == b'0' || c == b'1') {
            return Err(Error::BadValue(s.to_string()));
        }
        let mut b = Bitstring::EMPTY;
        for c in t.bytes() {
            b = b.child(c == b'1');
        }
        Ok(b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bs(s: &str) -> Bitstring {
        s.parse().unwrap()
    }

    #[test]
    fn structure() {
        let b = bs("0110");
        assert_eq!(b.len(), 4);
        assert_eq!(b.prefix(2), bs("01"));
        assert_eq!(b.suffix_from(1), bs("110"));
        assert_eq!(bs("01").concat(bs("10")), b);
        assert!(bs("").is_prefix_of(b));
        assert!(!bs("1").is_prefix_of(b));
        assert_eq!(b.ancestors().count(), 5);
        assert_eq!(bs("").to_string(), "ε");
    }

    #[test]
    fn order_is_lexicographic() {
        let mut v = [bs("1"), bs("01"), bs(""), bs("0"), bs("001"), bs("10")];
        v.sort();
        let s: Vec<String> = v.iter().map(|b| b.to_bits_string()).collect();
        assert_eq!(s, ["", "0", "001", "01", "1", "10"]);
    }

    #[test]
    fn splits_count_and_concat() {
        let b = bs("011");
        for i in 1..=4 {
            let all = bitstring_splits(b, i);
            assert_eq!(all.len() as u128, binomial(3 + i as u64 - 1, i as u64 - 1));
            for parts in &all {
                let joined = parts.iter().fold(Bitstring::EMPTY, |a, p| a.concat(*p));
                assert_eq!(joined, b);
            }
        }
        assert_eq!(bitstring_splits(b, 2)[1], vec![bs("0"), bs("11")]);
    }
}
