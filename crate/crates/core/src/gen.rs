//! Seeded synthetic databases.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::database::{Database, Relation, Value};
use crate::interval::Interval;
use crate::query::{Query, VarKind};

/// Shape of generated data. Interval cells are `[l, l + w]` with `l`
/// uniform in `0..domain` and `w` uniform in `0..=max_width`; point cells
/// are uniform in `0..point_domain`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenSpec {
    pub rows: usize,
    pub domain: u64,
    pub max_width: u64,
    pub point_domain: u64,
}

impl GenSpec {
    /// `n` rows per relation over a domain of `4n` with widths up to 8.
    pub fn scaled(n: usize) -> Self {
        GenSpec { rows: n, domain: 4 * n.max(1) as u64, max_width: 8, point_domain: n.max(1) as u64 }
    }
}

/// One relation per atom label with the atom's schema. The same seed and
/// spec always give the same database.
pub fn gen_synthetic(q: &Query, spec: &GenSpec, seed: u64) -> Database {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut db = Database::new();
    for a in &q.atoms {
        let mut rel = Relation::new(a.label.clone(), a.vars.clone());
        rel.reserve(spec.rows);
        for _ in 0..spec.rows {
            let row: Vec<Value> = a
                .vars
                .iter()
                .map(|v| match v.kind {
                    VarKind::Interval => {
                        let l = rng.gen_range(0..spec.domain.max(1)) as i64;
                        let w = rng.gen_range(0..=spec.max_width) as i64;
                        Value::interval(Interval::from_ints(l, l + w))
                    }
                    VarKind::Point => Value::int(rng.gen_range(0..spec.point_domain.max(1)) as i64),
                })
                .collect();
            rel.push(row);
        }
        db.insert(rel);
    }
    db
}
