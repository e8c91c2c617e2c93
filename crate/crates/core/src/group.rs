//! Finite groups as explicit multiplication tables, homomorphisms, and
//! group actions on finite carriers.
//!
//! Elements are indices into the table; index 0 is always the identity.

use crate::report::{Checker, CheckReport, Counterexample, Error, Policy, Radix, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<usize>,
    inv: Vec<usize>,
    labels: Option<Vec<String>>,
}

impl FiniteGroup {
    /// Build from an order×order table of element indices. Shape and range
    /// are validated here; the group laws themselves are `group_check`'s job.
    pub fn from_table(rows: Vec<Vec<usize>>) -> Result<Self> {
        let order = rows.len();
        if order == 0 {
            return Err(Error::input("group table must be non-empty"));
        }
        let mut table = Vec::with_capacity(order * order);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != order {
                return Err(Error::input(format!(
                    "group table row {i} has length {} but order is {order}",
                    row.len()
                )));
            }
            for (j, &v) in row.iter().enumerate() {
                if v >= order {
                    return Err(Error::input(format!(
                        "group table entry ({i},{j}) = {v} out of range"
                    )));
                }
                table.push(v);
            }
        }
        let mut inv = vec![usize::MAX; order];
        for g in 0..order {
            for h in 0..order {
                if table[g * order + h] == 0 {
                    inv[g] = h;
                    break;
                }
            }
        }
        Ok(FiniteGroup { order, table, inv, labels: None })
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.order {
            return Err(Error::input("label count must match group order"));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn mul(&self, g: usize, h: usize) -> usize {
        self.table[g * self.order + h]
    }

    pub fn inv(&self, g: usize) -> usize {
        self.inv[g]
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn label(&self, g: usize) -> String {
        match &self.labels {
            Some(l) => l[g].clone(),
            None => g.to_string(),
        }
    }

    pub fn table_rows(&self) -> Vec<Vec<usize>> {
        (0..self.order)
            .map(|g| (0..self.order).map(|h| self.mul(g, h)).collect())
            .collect()
    }

    /// Order of an element (smallest n ≥ 1 with gⁿ = e).
    pub fn element_order(&self, g: usize) -> usize {
        let mut x = g;
        let mut n = 1;
        while x != 0 {
            x = self.mul(x, g);
            n += 1;
        }
        n
    }

    /// Exponent of the group: lcm of all element orders.
    pub fn exponent(&self) -> usize {
        (0..self.order).fold(1usize, |acc, g| lcm(acc, self.element_order(g)))
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|g| (0..self.order).all(|h| self.mul(g, h) == self.mul(h, g)))
    }

    pub fn trivial() -> Self {
        FiniteGroup { order: 1, table: vec![0], inv: vec![0], labels: None }
    }

    pub fn cyclic(n: usize) -> Self {
        assert!(n >= 1);
        let mut table = Vec::with_capacity(n * n);
        for g in 0..n {
            for h in 0..n {
                table.push((g + h) % n);
            }
        }
        let inv = (0..n).map(|g| (n - g) % n).collect();
        FiniteGroup { order: n, table, inv, labels: None }
    }

    /// S3 in the fixed element order e, (12), (123), (132), (13), (23).
    /// Products compose right-to-left: (g·h)(x) = g(h(x)).
    pub fn symmetric_3() -> Self {
        let perms: [[usize; 3]; 6] = [
            [0, 1, 2], // e
            [1, 0, 2], // (12)
            [1, 2, 0], // (123)
            [2, 0, 1], // (132)
            [2, 1, 0], // (13)
            [0, 2, 1], // (23)
        ];
        let labels = ["e", "(12)", "(123)", "(132)", "(13)", "(23)"];
        let compose = |g: &[usize; 3], h: &[usize; 3]| {
            [g[h[0]], g[h[1]], g[h[2]]]
        };
        let index_of = |p: &[usize; 3]| perms.iter().position(|q| q == p).unwrap();
        let mut rows = Vec::new();
        for g in &perms {
            rows.push(perms.iter().map(|h| index_of(&compose(g, h))).collect());
        }
        FiniteGroup::from_table(rows)
            .unwrap()
            .with_labels(labels.iter().map(|s| s.to_string()).collect())
            .unwrap()
    }

    /// Multiplicative group of units mod a prime q, element i ↦ unit i+1.
    pub fn units_mod(q: u64) -> Result<Self> {
        if !crate::fq::is_prime(q) {
            return Err(Error::input(format!("{q} is not prime")));
        }
        let n = (q - 1) as usize;
        let mut rows = Vec::with_capacity(n);
        for a in 1..q {
            rows.push((1..q).map(|b| ((a * b) % q - 1) as usize).collect());
        }
        let labels = (1..q).map(|u| u.to_string()).collect();
        FiniteGroup::from_table(rows)?.with_labels(labels)
    }

    /// Direct product, pairs (a, b) encoded a·|B| + b.
    pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> Self {
        let n = a.order * b.order;
        let mut table = Vec::with_capacity(n * n);
        for ga in 0..a.order {
            for gb in 0..b.order {
                for ha in 0..a.order {
                    for hb in 0..b.order {
                        table.push(a.mul(ga, ha) * b.order + b.mul(gb, hb));
                    }
                }
            }
        }
        let mut inv = vec![0; n];
        for ga in 0..a.order {
            for gb in 0..b.order {
                inv[ga * b.order + gb] = a.inv(ga) * b.order + b.inv(gb);
            }
        }
        FiniteGroup { order: n, table, inv, labels: None }
    }

    /// Semidirect product H ⋊ G for an action of G on H by automorphisms:
    /// (h2,g2)(h1,g1) = (h2·α(g2)h1, g2g1), pairs encoded h·|G| + g.
    pub fn semidirect_product(h: &FiniteGroup, g: &FiniteGroup, alpha: &GroupAction) -> Self {
        let n = h.order * g.order;
        let mut table = Vec::with_capacity(n * n);
        for h2 in 0..h.order {
            for g2 in 0..g.order {
                for h1 in 0..h.order {
                    for g1 in 0..g.order {
                        let hh = h.mul(h2, alpha.act(g2, h1));
                        let gg = g.mul(g2, g1);
                        table.push(hh * g.order + gg);
                    }
                }
            }
        }
        let mut inv = vec![0; n];
        for hx in 0..h.order {
            for gx in 0..g.order {
                let gi = g.inv(gx);
                let hi = alpha.act(gi, h.inv(hx));
                inv[hx * g.order + gx] = hi * g.order + gi;
            }
        }
        FiniteGroup { order: n, table, inv, labels: None }
    }

    /// Subgroup on an explicit (closed) element list; element i of the result
    /// is `members[i]`. Fails if the list is not closed or lacks the identity.
    pub fn subgroup(&self, members: &[usize]) -> Result<(FiniteGroup, Vec<usize>)> {
        if members.first() != Some(&0) {
            return Err(Error::input("subgroup member list must start with the identity"));
        }
        let pos = |x: usize| members.iter().position(|&m| m == x);
        let n = members.len();
        let mut rows = Vec::with_capacity(n);
        for &a in members {
            let mut row = Vec::with_capacity(n);
            for &b in members {
                match pos(self.mul(a, b)) {
                    Some(p) => row.push(p),
                    None => {
                        return Err(Error::input(format!(
                            "subgroup not closed: {} · {} lands outside",
                            self.label(a),
                            self.label(b)
                        )))
                    }
                }
            }
            rows.push(row);
        }
        let mut sub = FiniteGroup::from_table(rows)?;
        if let Some(_) = &self.labels {
            sub = sub.with_labels(members.iter().map(|&m| self.label(m)).collect())?;
        }
        Ok((sub, members.to_vec()))
    }
}

/// Brute-force isomorphism search; practical for the desk-scale groups used
/// here. Returns the bijection (indexed by elements of `a`) if one exists.
pub fn group_isomorphism(a: &FiniteGroup, b: &FiniteGroup) -> Option<Vec<usize>> {
    if a.order() != b.order() {
        return None;
    }
    let n = a.order();
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    map[0] = 0;
    used[0] = true;
    fn extend(
        a: &FiniteGroup,
        b: &FiniteGroup,
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
        next: usize,
    ) -> bool {
        let n = a.order();
        if next == n {
            return true;
        }
        if map[next] != usize::MAX {
            return extend(a, b, map, used, next + 1);
        }
        for cand in 0..n {
            if used[cand] || a.element_order(next) != b.element_order(cand) {
                continue;
            }
            map[next] = cand;
            used[cand] = true;
            let consistent = (0..=next).all(|x| {
                (0..=next).all(|y| {
                    let p = a.mul(x, y);
                    map[x] != usize::MAX
                        && map[y] != usize::MAX
                        && (map[p] == usize::MAX || map[p] == b.mul(map[x], map[y]))
                })
            });
            if consistent && extend(a, b, map, used, next + 1) {
                return true;
            }
            map[next] = usize::MAX;
            used[cand] = false;
        }
        false
    }
    if extend(a, b, &mut map, &mut used, 1) {
        // full multiplicativity check; the search only prunes partially
        let ok = (0..n).all(|x| (0..n).all(|y| map[a.mul(x, y)] == b.mul(map[x], map[y])));
        if ok {
            return Some(map);
        }
    }
    None
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Validates the group laws and reports the least violating tuple.
pub fn group_check(g: &FiniteGroup, policy: &Policy) -> CheckReport {
    let n = g.order() as u128;
    let mut checker = Checker::new(policy);
    checker.law("identity", n, |i| {
        let x = i as usize;
        if g.mul(x, 0) != x || g.mul(0, x) != x {
            Some(Counterexample::new(
                vec![format!("g={}", g.label(x))],
                format!("g·e={}, e·g={}", g.label(g.mul(x, 0)), g.label(g.mul(0, x))),
                format!("{}", g.label(x)),
            ))
        } else {
            None
        }
    });
    checker.law("inverse", n, |i| {
        let x = i as usize;
        if g.inv(x) == usize::MAX || g.mul(x, g.inv(x)) != 0 {
            Some(Counterexample::new(
                vec![format!("g={}", g.label(x))],
                "no h with g·h = e".to_string(),
                "e".to_string(),
            ))
        } else {
            None
        }
    });
    let radix = Radix::new(&[n, n, n]);
    checker.law("associativity", radix.space(), |idx| {
        let t = radix.decode(idx);
        let (a, b, c) = (t[0] as usize, t[1] as usize, t[2] as usize);
        let l = g.mul(g.mul(a, b), c);
        let r = g.mul(a, g.mul(b, c));
        if l != r {
            Some(Counterexample::new(
                vec![
                    format!("a={}", g.label(a)),
                    format!("b={}", g.label(b)),
                    format!("c={}", g.label(c)),
                ],
                format!("(a·b)·c = {}", g.label(l)),
                format!("a·(b·c) = {}", g.label(r)),
            ))
        } else {
            None
        }
    });
    checker.finish()
}

#[derive(Debug, Clone)]
pub struct GroupHom {
    pub domain: FiniteGroup,
    pub codomain: FiniteGroup,
    pub map: Vec<usize>,
}

impl GroupHom {
    pub fn new(domain: FiniteGroup, codomain: FiniteGroup, map: Vec<usize>) -> Result<Self> {
        if map.len() != domain.order() {
            return Err(Error::input(format!(
                "hom map has {} entries, domain order is {}",
                map.len(),
                domain.order()
            )));
        }
        if let Some(&bad) = map.iter().find(|&&v| v >= codomain.order()) {
            return Err(Error::input(format!("hom value {bad} out of codomain range")));
        }
        Ok(GroupHom { domain, codomain, map })
    }

    pub fn apply(&self, g: usize) -> usize {
        self.map[g]
    }

    /// Constant map onto the codomain identity.
    pub fn trivial(domain: FiniteGroup, codomain: FiniteGroup) -> Self {
        let map = vec![0; domain.order()];
        GroupHom { domain, codomain, map }
    }

    pub fn identity(g: FiniteGroup) -> Self {
        let map = (0..g.order()).collect();
        GroupHom { domain: g.clone(), codomain: g, map }
    }
}

pub fn hom_check(f: &GroupHom, policy: &Policy) -> CheckReport {
    let n = f.domain.order() as u128;
    let mut checker = Checker::new(policy);
    checker.law("identity", 1, |_| {
        if f.apply(0) != 0 {
            Some(Counterexample::new(
                vec!["e".to_string()],
                format!("f(e) = {}", f.codomain.label(f.apply(0))),
                "e".to_string(),
            ))
        } else {
            None
        }
    });
    let radix = Radix::new(&[n, n]);
    checker.law("multiplicative", radix.space(), |idx| {
        let t = radix.decode(idx);
        let (a, b) = (t[0] as usize, t[1] as usize);
        let l = f.apply(f.domain.mul(a, b));
        let r = f.codomain.mul(f.apply(a), f.apply(b));
        if l != r {
            Some(Counterexample::new(
                vec![
                    format!("a={}", f.domain.label(a)),
                    format!("b={}", f.domain.label(b)),
                ],
                format!("f(a·b) = {}", f.codomain.label(l)),
                format!("f(a)·f(b) = {}", f.codomain.label(r)),
            ))
        } else {
            None
        }
    });
    checker.finish()
}

/// A group acting by permutations on a carrier 0..carrier_size.
#[derive(Debug, Clone)]
pub struct GroupAction {
    pub group: FiniteGroup,
    pub carrier_size: usize,
    perms: Vec<Vec<usize>>,
}

impl GroupAction {
    pub fn new(group: FiniteGroup, perms: Vec<Vec<usize>>) -> Result<Self> {
        if perms.len() != group.order() {
            return Err(Error::input(format!(
                "action has {} permutations, group order is {}",
                perms.len(),
                group.order()
            )));
        }
        let carrier_size = perms.first().map(|p| p.len()).unwrap_or(0);
        for (g, p) in perms.iter().enumerate() {
            if p.len() != carrier_size {
                return Err(Error::input(format!("permutation {g} has inconsistent length")));
            }
            let mut seen = vec![false; carrier_size];
            for &x in p {
                if x >= carrier_size || seen[x] {
                    return Err(Error::input(format!(
                        "entry of permutation {g} is not a bijection of the carrier"
                    )));
                }
                seen[x] = true;
            }
        }
        Ok(GroupAction { group, carrier_size, perms })
    }

    pub fn trivial(group: FiniteGroup, carrier_size: usize) -> Self {
        let perms = vec![(0..carrier_size).collect(); group.order()];
        GroupAction { group, carrier_size, perms }
    }

    pub fn act(&self, g: usize, x: usize) -> usize {
        self.perms[g][x]
    }

    pub fn perms(&self) -> &[Vec<usize>] {
        &self.perms
    }
}

/// act(e) = id and act(g·h) = act(g)∘act(h).
pub fn group_action_check(a: &GroupAction, policy: &Policy) -> CheckReport {
    let n = a.group.order() as u128;
    let m = a.carrier_size as u128;
    let mut checker = Checker::new(policy);
    checker.law("identity", m, |i| {
        let x = i as usize;
        if a.act(0, x) != x {
            Some(Counterexample::new(
                vec![format!("x={x}")],
                format!("e·x = {}", a.act(0, x)),
                format!("{x}"),
            ))
        } else {
            None
        }
    });
    let radix = Radix::new(&[n, n, m]);
    checker.law("homomorphism", radix.space(), |idx| {
        let t = radix.decode(idx);
        let (g, h, x) = (t[0] as usize, t[1] as usize, t[2] as usize);
        let l = a.act(a.group.mul(g, h), x);
        let r = a.act(g, a.act(h, x));
        if l != r {
            Some(Counterexample::new(
                vec![
                    format!("g={}", a.group.label(g)),
                    format!("h={}", a.group.label(h)),
                    format!("x={x}"),
                ],
                format!("(g·h)·x = {l}"),
                format!("g·(h·x) = {r}"),
            ))
        } else {
            None
        }
    });
    checker.finish()
}

/// For actions on a group carrier: every act(g) must also be multiplicative.
pub fn action_by_automorphisms_check(
    a: &GroupAction,
    h: &FiniteGroup,
    policy: &Policy,
) -> Result<CheckReport> {
    if a.carrier_size != h.order() {
        return Err(Error::input("action carrier does not match the target group order"));
    }
    let base = group_action_check(a, policy);
    if !base.passed() {
        return Ok(base);
    }
    let n = a.group.order() as u128;
    let m = h.order() as u128;
    let mut checker = Checker::new(policy);
    for law in base.laws {
        checker.push(law);
    }
    let radix = Radix::new(&[n, m, m]);
    checker.law("automorphism", radix.space(), |idx| {
        let t = radix.decode(idx);
        let (g, x, y) = (t[0] as usize, t[1] as usize, t[2] as usize);
        let l = a.act(g, h.mul(x, y));
        let r = h.mul(a.act(g, x), a.act(g, y));
        if l != r {
            Some(Counterexample::new(
                vec![
                    format!("g={}", a.group.label(g)),
                    format!("x={}", h.label(x)),
                    format!("y={}", h.label(y)),
                ],
                format!("α(g)(x·y) = {}", h.label(l)),
                format!("α(g)x·α(g)y = {}", h.label(r)),
            ))
        } else {
            None
        }
    });
    Ok(checker.finish())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn z4_passes() {
        let g = FiniteGroup::cyclic(4);
        assert!(group_check(&g, &Policy::default()).passed());
    }

    #[test]
    fn s3_passes_and_has_expected_structure() {
        let g = FiniteGroup::symmetric_3();
        assert!(group_check(&g, &Policy::default()).passed());
        assert!(!g.is_abelian());
        assert_eq!(g.label(1), "(12)");
        assert_eq!(g.label(2), "(123)");
        assert_eq!(g.element_order(1), 2);
        assert_eq!(g.element_order(2), 3);
        // conjugation of (123) by (12) is (132)
        let c = g.mul(g.mul(1, 2), g.inv(1));
        assert_eq!(g.label(c), "(132)");
    }

    #[test]
    fn corrupted_table_fails_with_least_triple() {
        // Z/4 with one entry swapped so that (1·1)·2 ≠ 1·(1·2).
        let mut rows = FiniteGroup::cyclic(4).table_rows();
        rows[1][1] = 3; // was 2
        let g = FiniteGroup::from_table(rows).unwrap();
        let report = group_check(&g, &Policy::default());
        assert!(!report.passed());
        // independent oracle: least violating triple by brute scan
        let mut expected = None;
        'outer: for a in 0..4usize {
            for b in 0..4 {
                for c in 0..4 {
                    if g.mul(g.mul(a, b), c) != g.mul(a, g.mul(b, c)) {
                        expected = Some((a, b, c));
                        break 'outer;
                    }
                }
            }
        }
        let (a, b, c) = expected.expect("corruption must break associativity");
        let law = report.law("associativity").unwrap();
        let cx = law.counterexample.as_ref().unwrap();
        assert_eq!(cx.tuple, vec![format!("a={a}"), format!("b={b}"), format!("c={c}")]);
    }

    #[test]
    fn malformed_table_is_an_input_error() {
        assert!(FiniteGroup::from_table(vec![vec![0, 1], vec![1]]).is_err());
        assert!(FiniteGroup::from_table(vec![vec![0, 5], vec![1, 0]]).is_err());
    }

    #[test]
    fn sign_hom_passes() {
        let s3 = FiniteGroup::symmetric_3();
        let z2 = FiniteGroup::cyclic(2);
        // order e,(12),(123),(132),(13),(23): parities 0,1,0,0,1,1
        let sign = GroupHom::new(s3, z2, vec![0, 1, 0, 0, 1, 1]).unwrap();
        assert!(hom_check(&sign, &Policy::default()).passed());
    }

    #[test]
    fn trivial_hom_passes() {
        let h = FiniteGroup::symmetric_3();
        let g = FiniteGroup::cyclic(2);
        let f = GroupHom::trivial(h, g);
        assert!(hom_check(&f, &Policy::default()).passed());
    }

    #[test]
    fn shift_map_fails_at_identity_pair() {
        let z4 = FiniteGroup::cyclic(4);
        let f = GroupHom::new(z4.clone(), z4, vec![1, 2, 3, 0]).unwrap();
        let report = hom_check(&f, &Policy::default());
        assert!(!report.passed());
        // least violating pair is (0,0): f(0·0)=1 but f(0)·f(0)=2
        let cx = report.law("multiplicative").unwrap().counterexample.as_ref().unwrap();
        assert_eq!(cx.tuple, vec!["a=0", "b=0"]);
    }

    #[test]
    fn units_mod_5_is_cyclic_of_order_4() {
        let u = FiniteGroup::units_mod(5).unwrap();
        assert_eq!(u.order(), 4);
        assert!(group_check(&u, &Policy::default()).passed());
        assert!(group_isomorphism(&u, &FiniteGroup::cyclic(4)).is_some());
    }

    #[test]
    fn semidirect_z3_z2_is_s3() {
        let z3 = FiniteGroup::cyclic(3);
        let z2 = FiniteGroup::cyclic(2);
        // inversion action of Z/2 on Z/3
        let alpha = GroupAction::new(z2.clone(), vec![vec![0, 1, 2], vec![0, 2, 1]]).unwrap();
        let sd = FiniteGroup::semidirect_product(&z3, &z2, &alpha);
        assert!(group_check(&sd, &Policy::default()).passed());
        assert!(group_isomorphism(&sd, &FiniteGroup::symmetric_3()).is_some());
        assert!(group_isomorphism(&sd, &FiniteGroup::cyclic(6)).is_none());
    }

    #[test]
    fn action_checks() {
        let z2 = FiniteGroup::cyclic(2);
        let neg3 = GroupAction::new(z2.clone(), vec![vec![0, 1, 2], vec![0, 2, 1]]).unwrap();
        assert!(group_action_check(&neg3, &Policy::default()).passed());
        let z3 = FiniteGroup::cyclic(3);
        let rep = action_by_automorphisms_check(&neg3, &z3, &Policy::default()).unwrap();
        assert!(rep.passed());
        // the 3-cycle on Z/3's carrier is a bijection but not an automorphism
        let shift = GroupAction::new(z2, vec![vec![0, 1, 2], vec![1, 2, 0]]).unwrap();
        let rep = action_by_automorphisms_check(&shift, &z3, &Policy::default()).unwrap();
        assert!(!rep.passed());
    }

    #[test]
    fn exponent_and_subgroup() {
        let s3 = FiniteGroup::symmetric_3();
        assert_eq!(s3.exponent(), 6);
        let (a3, embed) = s3.subgroup(&[0, 2, 3]).unwrap();
        assert_eq!(a3.order(), 3);
        assert_eq!(embed, vec![0, 2, 3]);
        assert!(group_isomorphism(&a3, &FiniteGroup::cyclic(3)).is_some());
        assert!(s3.subgroup(&[0, 1, 2]).is_err());
    }
}
