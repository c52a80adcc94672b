use std::fmt;
use std::str::FromStr;

use crate::groups::FiniteSupportMeasure;
use crate::{Error, Result};

/// The second exponent `tau(n)` of an eccentric pair average.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EccentricitySchedule {
    Identity,
    /// `n^k`.
    Power(u32),
    /// `ceil(log2 n) + 1`.
    CeilLog2PlusOne,
    /// `tau(n)` is entry `n - 1`; queries past the end are errors.
    Explicit(Vec<usize>),
}

impl EccentricitySchedule {
    pub fn tau(&self, n: usize) -> Result<usize> {
        if n == 0 {
            return Err(Error::InvalidMeasure("schedules start at n = 1".into()));
        }
        match self {
            EccentricitySchedule::Identity => Ok(n),
            EccentricitySchedule::Power(k) => {
                n.checked_pow(*k).ok_or_else(|| Error::InvalidMeasure(format!("{n}^{k} overflows")))
            }
            EccentricitySchedule::CeilLog2PlusOne => Ok(ceil_log2(n) + 1),
            EccentricitySchedule::Explicit(table) => table
                .get(n - 1)
                .copied()
                .ok_or_else(|| Error::InvalidMeasure(format!("explicit schedule has no entry for n = {n}"))),
        }
    }
}

fn ceil_log2(n: usize) -> usize {
    if n <= 1 {
        0
    } else {
        (usize::BITS - (n - 1).leading_zeros()) as usize
    }
}

impl fmt::Display for EccentricitySchedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EccentricitySchedule::Identity => write!(f, "identity"),
            EccentricitySchedule::Power(k) => write!(f, "power({k})"),
            EccentricitySchedule::CeilLog2PlusOne => write!(f, "log2"),
            EccentricitySchedule::Explicit(t) => {
                let parts: Vec<String> = t.iter().map(ToString::to_string).collect();
                write!(f, "explicit({})", parts.join(","))
            }
        }
    }
}

impl FromStr for EccentricitySchedule {
    type Err = Error;

    /// `identity`, `power(k)`, `log2`, `explicit(t1,t2,...)`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::parse(0, format!("unknown schedule {s:?}"));
        let inner = |prefix: &str| s.strip_prefix(prefix).and_then(|r| r.strip_suffix(')'));
        let schedule = if s == "identity" {
            EccentricitySchedule::Identity
        } else if s == "log2" {
            EccentricitySchedule::CeilLog2PlusOne
        } else if let Some(k) = inner("power(") {
            EccentricitySchedule::Power(k.trim().parse().map_err(|_| bad())?)
        } else if let Some(list) = inner("explicit(") {
            let table = list.split(',').map(|t| t.trim().parse().map_err(|_| bad())).collect::<Result<Vec<usize>>>()?;
            EccentricitySchedule::Explicit(table)
        } else {
            return Err(bad());
        };
        if let EccentricitySchedule::Explicit(t) = &schedule {
            if t.contains(&0) {
                return Err(Error::parse(0, "explicit schedule entries must be at least 1"));
            }
        }
        Ok(schedule)
    }
}

/// `w^{*n} x u^{*tau(n)}` on `G x H`, exactly.
pub fn eccentric_measures(
    w: &FiniteSupportMeasure,
    u: &FiniteSupportMeasure,
    schedule: &EccentricitySchedule,
    n: usize,
) -> Result<FiniteSupportMeasure> {
    let tau = schedule.tau(n)?;
    Ok(w.autoconvolve(n)?.product(&u.autoconvolve(tau)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::GroupDescriptor;
    use crate::rational::ratio;

    #[test]
    fn schedule_values() {
        let log = EccentricitySchedule::CeilLog2PlusOne;
        let got: Vec<usize> = (1..=9).map(|n| log.tau(n).unwrap()).collect();
        assert_eq!(got, vec![1, 2, 3, 3, 4, 4, 4, 4, 5]);
        assert_eq!(EccentricitySchedule::Power(2).tau(7).unwrap(), 49);
        assert_eq!(EccentricitySchedule::Identity.tau(7).unwrap(), 7);
        let e = EccentricitySchedule::Explicit(vec![3, 1]);
        assert_eq!(e.tau(2).unwrap(), 1);
        assert!(e.tau(3).is_err());
        for s in ["identity", "power(3)", "log2", "explicit(1,4,9)"] {
            assert_eq!(s.parse::<EccentricitySchedule>().unwrap().to_string(), s);
        }
        assert!("explicit(0)".parse::<EccentricitySchedule>().is_err());
    }

    #[test]
    fn eccentric_measure_examples() {
        let z = GroupDescriptor::free(1).unwrap();
        let w = FiniteSupportMeasure::parse_text(&z, "a1' 1/2\na1 1/2\n").unwrap();
        let m = eccentric_measures(&w, &w, &EccentricitySchedule::Identity, 1).unwrap();
        assert_eq!(m, w.product(&w));

        let a = FiniteSupportMeasure::parse_text(&z, "a1 1\n").unwrap();
        let m = eccentric_measures(&a, &a, &EccentricitySchedule::Power(2), 2).unwrap();
        let zz = m.group().clone();
        assert_eq!(m.support(), vec![zz.parse_element("(a1 a1|a1 a1 a1 a1)").unwrap()]);

        let m = eccentric_measures(&w, &w, &EccentricitySchedule::Power(2), 2).unwrap();
        let left = [ratio(1, 4), ratio(1, 2), ratio(1, 4)];
        let right = [ratio(1, 16), ratio(4, 16), ratio(6, 16), ratio(4, 16), ratio(1, 16)];
        let power = |k: i64| -> String {
            match k {
                0 => "e".into(),
                k if k > 0 => vec!["a1"; k as usize].join(" "),
                k => vec!["a1'"; (-k) as usize].join(" "),
            }
        };
        assert_eq!(m.support_size(), 15);
        for (i, l) in left.iter().enumerate() {
            for (j, r) in right.iter().enumerate() {
                let g =
                    zz.parse_element(&format!("({}|{})", power(2 * i as i64 - 2), power(2 * j as i64 - 4))).unwrap();
                assert_eq!(m.weight(&g), l * r);
            }
        }
    }
}
