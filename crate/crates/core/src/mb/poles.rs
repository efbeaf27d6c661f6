use super::{MbIntegrand, Side, POLE_TOL};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pole {
    pub location: f64,
    pub order: u32,
    /// Poles sharing a class lie on one arithmetic progression of step 1.
    pub class: usize,
}

/// Net pole order of the integrand at `s` (negative means a zero).
pub(crate) fn net_order(ib: &MbIntegrand, s: f64) -> i32 {
    let num = ib.num.iter().filter(|g| g.pole_index(s).is_some()).count() as i32;
    let den = ib.den.iter().filter(|g| g.pole_index(s).is_some()).count() as i32;
    let rat: i32 = ib
        .rational
        .iter()
        .filter(|r| (r.root - s).abs() < POLE_TOL)
        .map(|r| r.power)
        .sum();
    num - den - rat
}

fn same_class(a: f64, b: f64) -> bool {
    let d = a - b;
    (d - d.round()).abs() < POLE_TOL
}

/// Poles of the chains on `side`, each gamma chain followed for `max_chain`
/// steps from the top of its class. Left poles come in decreasing order, right
/// poles in increasing order.
pub fn enumerate_poles(ib: &MbIntegrand, side: Side, max_chain: usize) -> Result<Vec<Pole>> {
    let dir = match side {
        Side::Left => -1.0,
        Side::Right => 1.0,
    };
    // (start, infinite chain?)
    let mut starts: Vec<(f64, bool)> = ib
        .num
        .iter()
        .filter(|g| g.side() == side)
        .map(|g| (g.chain_start(), true))
        .collect();
    starts.extend(
        ib.rational
            .iter()
            .filter(|r| r.power < 0 && r.side == side)
            .map(|r| (r.root, false)),
    );

    let mut classes: Vec<Vec<(f64, bool)>> = Vec::new();
    for st in starts {
        match classes.iter_mut().find(|c| same_class(c[0].0, st.0)) {
            Some(c) => c.push(st),
            None => classes.push(vec![st]),
        }
    }

    let mut poles = Vec::new();
    for (ci, class) in classes.iter().enumerate() {
        let mut locs: Vec<f64> = class.iter().filter(|s| !s.1).map(|s| s.0).collect();
        // the chain top is the start furthest from the contour's interior
        let top = class
            .iter()
            .filter(|s| s.1)
            .map(|s| s.0)
            .fold(None, |acc: Option<f64>, v| {
                Some(match acc {
                    None => v,
                    Some(a) if dir < 0.0 => a.max(v),
                    Some(a) => a.min(v),
                })
            });
        if let Some(top) = top {
            locs.extend((0..max_chain).map(|nu| top + dir * nu as f64));
        }
        locs.sort_by(|a, b| (dir * a).partial_cmp(&(dir * b)).unwrap());
        locs.dedup_by(|a, b| (*a - *b).abs() < POLE_TOL);
        for s in locs {
            let order = net_order(ib, s);
            if order <= 0 {
                continue;
            }
            let other = ib.num.iter().any(|g| g.side() != side && g.pole_index(s).is_some())
                || ib
                    .rational
                    .iter()
                    .any(|r| r.power < 0 && r.side != side && (r.root - s).abs() < POLE_TOL);
            if other {
                return Err(Error::PinchedContour(s));
            }
            poles.push(Pole {
                location: s,
                order: order as u32,
                class: ci,
            });
        }
    }
    poles.sort_by(|a, b| (dir * a.location).partial_cmp(&(dir * b.location)).unwrap());
    Ok(poles)
}
