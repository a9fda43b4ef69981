//! Conventional p-persistent slotted ALOHA without NOMA: a slot succeeds only
//! when exactly one user transmits, and that user gets `log2(1 + v1)`.

use crate::model::Scenario;

pub fn baseline_success(s: &Scenario, p: f64) -> f64 {
    p * (1.0 - p).powi(s.m() as i32 - 1)
}

pub fn baseline_throughput(s: &Scenario, p: f64) -> f64 {
    (1.0 + s.v1()).log2() * baseline_success(s, p)
}

/// Maximizer `p = 1/m` of the conventional throughput and the value it attains.
pub fn baseline_optimum(s: &Scenario) -> (f64, f64) {
    let p = 1.0 / s.m() as f64;
    (p, baseline_throughput(s, p))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn success_examples() {
        let s = Scenario::default();
        assert!((baseline_success(&s, 0.1) - 0.1 * 0.9f64.powi(9)).abs() < 1e-16);
        assert!((baseline_success(&s, 0.1) - 0.038742).abs() < 1e-6);
        assert_eq!(baseline_success(&s, 0.0), 0.0);
        let single = s.with_m(1).unwrap();
        assert_eq!(baseline_success(&single, 1.0), 1.0);
    }

    #[test]
    fn optimum_examples() {
        let s = Scenario::default();
        let (p, th) = baseline_optimum(&s);
        assert_eq!(p, 0.1);
        assert!((th - 0.08996).abs() < 1e-5);

        let (p, th) = baseline_optimum(&s.with_m(1).unwrap());
        assert_eq!(p, 1.0);
        assert_eq!(th, 5f64.log2());

        let (p, th) = baseline_optimum(&s.with_m(2).unwrap());
        assert_eq!(p, 0.5);
        assert!((th - 5f64.log2() * 0.25).abs() < 1e-15);
        assert!((th - 0.5805).abs() < 1e-4);
    }
}
