use crate::error::{argument, Result};
use crate::marginal::{cdf_exact, psi_exact};
use crate::params::Params;

use super::levels::LevelSet;

/// Where a value in a [`MaxLawTable`] came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Recursion,
    ClosedForm,
    Oracle,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Entry {
    pub value: f64,
    pub provenance: Provenance,
}

/// `P_{s,i} = P(M_s <= u_{n-i})` for `1 <= s <= j_n + 1`, `0 <= i <= j_n - s + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct MaxLawTable {
    pub j_n: u32,
    rows: Vec<Vec<Entry>>,
}

impl MaxLawTable {
    /// Fills the table from the one-step recursion
    /// `P_{s,i} = p P_{s-1,0} + q P_{s-1,i+1}` with base `P_{1,i} = F(u_{n-i})`.
    pub fn build(params: &Params, levels: &LevelSet, depth: u32) -> Result<Self> {
        let j = levels.j_n as usize;
        let mut base = Vec::with_capacity(j + 1);
        for i in 0..=j {
            let v = cdf_exact(params, &levels.level(i as u32), depth)?.value;
            base.push(Entry {
                value: v,
                provenance: Provenance::Recursion,
            });
        }
        let mut rows = vec![base];
        for s in 2..=j + 1 {
            let prev = &rows[s - 2];
            let row: Vec<Entry> = (0..=j + 1 - s)
                .map(|i| Entry {
                    value: params.p() * prev[0].value + params.q() * prev[i + 1].value,
                    provenance: Provenance::Recursion,
                })
                .collect();
            rows.push(row);
        }
        Ok(MaxLawTable {
            j_n: levels.j_n,
            rows,
        })
    }

    pub fn get(&self, s: u32, i: u32) -> Option<Entry> {
        if s == 0 {
            return None;
        }
        self.rows.get(s as usize - 1)?.get(i as usize).copied()
    }

    /// Row `s` as values.
    pub fn row(&self, s: u32) -> Option<Vec<f64>> {
        if s == 0 {
            return None;
        }
        Some(
            self.rows
                .get(s as usize - 1)?
                .iter()
                .map(|e| e.value)
                .collect(),
        )
    }

    /// Replaces `P_{s,i}` with a value from another source.
    pub fn record(&mut self, s: u32, i: u32, value: f64, provenance: Provenance) -> Result<()> {
        match self
            .rows
            .get_mut(s.saturating_sub(1) as usize)
            .and_then(|r| r.get_mut(i as usize))
        {
            Some(e) if s > 0 => {
                *e = Entry { value, provenance };
                Ok(())
            }
            _ => argument(format!("no table entry at s = {s}, i = {i}")),
        }
    }
}

/// `P(M_s <= u_{n-i})` by the recursion.
pub fn p_recursion(params: &Params, levels: &LevelSet, s: u32, i: u32, depth: u32) -> Result<f64> {
    if s < 1 || s > levels.j_n + 1 || i + s > levels.j_n + 1 {
        return argument(format!(
            "recursion needs 1 <= s and i + s <= j_n + 1 = {}, got s = {s}, i = {i}",
            levels.j_n + 1
        ));
    }
    let table = MaxLawTable::build(params, levels, depth)?;
    Ok(table.get(s, i).expect("index checked").value)
}

/// `P(M_s <= u_n) = 1 - (p (s - 1) + 1) q^n psi(x)` for `2 <= s <= j_n + 1`.
pub fn closed_form(params: &Params, levels: &LevelSet, s: u32, depth: u32) -> Result<f64> {
    if s < 2 || s > levels.j_n + 1 {
        return argument(format!(
            "closed form holds for 2 <= s <= j_n + 1 = {}, got {s}",
            levels.j_n + 1
        ));
    }
    let psi = psi_exact(params, levels.x_exact(), depth)?;
    let tail = params.q().powi(levels.n as i32) * psi;
    Ok(1.0 - (params.p() * (s - 1) as f64 + 1.0) * tail)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlaw::make_levels;

    #[test]
    fn anchor_value() {
        // beta = 1/2, q = 1/2, x = -1, n = 3, s = 2: 1 - (1/2 + 1)/8.
        let pr = Params::ratio(1, 2, 0.5).unwrap();
        let l = make_levels(&pr, -1.0, 3).unwrap();
        assert!((closed_form(&pr, &l, 2, 64).unwrap() - 0.8125).abs() < 1e-15);
        assert!((p_recursion(&pr, &l, 2, 0, 64).unwrap() - 0.8125).abs() < 1e-15);
    }

    #[test]
    fn ranges_are_enforced() {
        let pr = Params::ratio(1, 3, 0.5).unwrap();
        let l = make_levels(&pr, -1.0, 4).unwrap();
        assert!(closed_form(&pr, &l, 1, 64).is_err());
        assert!(closed_form(&pr, &l, l.j_n + 2, 64).is_err());
        assert!(p_recursion(&pr, &l, 0, 0, 64).is_err());
        assert!(p_recursion(&pr, &l, 2, l.j_n, 64).is_err());
        let t = MaxLawTable::build(&pr, &l, 64).unwrap();
        assert!(t.get(l.j_n + 1, 0).is_some());
        assert!(t.get(l.j_n + 2, 0).is_none());
    }

    #[test]
    fn table_is_monotone() {
        let pr = Params::ratio(2, 5, 0.3).unwrap();
        let l = make_levels(&pr, -0.7, 6).unwrap();
        let t = MaxLawTable::build(&pr, &l, 64).unwrap();
        for s in 1..=l.j_n + 1 {
            let row = t.row(s).unwrap();
            for w in row.windows(2) {
                assert!(w[1] <= w[0] + 1e-15);
            }
            if s > 1 {
                let prev = t.row(s - 1).unwrap();
                for (i, v) in row.iter().enumerate() {
                    assert!(*v <= prev[i] + 1e-15);
                }
            }
        }
    }
}
