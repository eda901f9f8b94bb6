use super::{build_directions, Angle, Arc, ArcFunction, DirectionFamily, GeometrySpec, Piece};
use crate::logkernel::solve_c;
use crate::orlicz::ScheduleParams;
use crate::trignorms::rudin_shapiro;
use crate::{Error, Result};

/// Signs `ε_1..ε_n`, each `±1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignSequence(Vec<i8>);

impl SignSequence {
    pub fn new(eps: Vec<i8>) -> Result<Self> {
        if let Some(bad) = eps.iter().find(|e| e.abs() != 1) {
            return Err(Error::Domain(format!("signs must be ±1, got {bad}")));
        }
        Ok(Self(eps))
    }

    pub fn all_plus(n: usize) -> Self {
        Self(vec![1; n])
    }

    pub fn as_slice(&self) -> &[i8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `ε_k` with 1-based `k`.
    pub fn get(&self, k: usize) -> f64 {
        f64::from(self.0[k - 1])
    }

    pub fn negated(&self) -> Self {
        Self(self.0.iter().map(|e| -e).collect())
    }
}

/// The atom `c(-χ_I + χ_{R_{π/2} I} - χ_{R_π I} + χ_{R_{3π/2} I})`.
pub fn make_w(arc: &Arc, c: f64) -> Result<ArcFunction> {
    if arc.length() >= std::f64::consts::PI / 8.0 {
        return Err(Error::Domain(format!(
            "atom arcs must be shorter than π/8, got {}",
            arc.length()
        )));
    }
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::Domain(format!("atom height must be positive, got {c}")));
    }
    let pieces = (0..4)
        .map(|j| Piece {
            arc: arc.quarter_turns(j),
            coeff: if j % 2 == 0 { -c } else { c },
        })
        .collect();
    ArcFunction::new(pieces)
}

/// Global sign `(-1)^k ε_{⌈k/2⌉}` carried by atom `k` (1-based) in `Ω_n`.
pub fn atom_sign(signs: &SignSequence, k: usize) -> f64 {
    let parity = if k.is_multiple_of(2) { 1.0 } else { -1.0 };
    parity * signs.get(k.div_ceil(2))
}

/// `Ω_n = Σ_{k=1}^{2n} (-1)^k ε_{⌈k/2⌉} w_k`.
pub fn assemble_omega(atoms: &[ArcFunction], signs: &SignSequence) -> Result<ArcFunction> {
    if atoms.len() != 2 * signs.len() {
        return Err(Error::Parameter(format!(
            "{} atoms need {} signs, got {}",
            atoms.len(),
            atoms.len() / 2,
            signs.len()
        )));
    }
    let signed: Vec<ArcFunction> = atoms
        .iter()
        .enumerate()
        .map(|(i, w)| w.scaled(atom_sign(signs, i + 1)))
        .collect();
    ArcFunction::disjoint_sum(&signed)
}

/// A complete instance of the counterexample kernel.
#[derive(Clone, Debug)]
pub struct Construction {
    pub params: ScheduleParams,
    pub dirs: DirectionFamily,
    /// Support arcs `I_k` of length `1/N`, centred a quarter turn clockwise of `x_k`.
    pub arcs: Vec<Arc>,
    /// Guard arcs `J_k` of length `1/(100n)`, centred on `x_k`.
    pub guards: Vec<Arc>,
    /// Common atom height `c_{I_k}`.
    pub c: f64,
    pub signs: SignSequence,
    pub atoms: Vec<ArcFunction>,
    pub omega: ArcFunction,
}

impl Construction {
    /// Builds `Ω_n` with Rudin–Shapiro signs.
    pub fn new(params: ScheduleParams, geometry: GeometrySpec) -> Result<Self> {
        let signs = rudin_shapiro(params.n);
        Self::with_signs(params, geometry, signs)
    }

    pub fn with_signs(
        params: ScheduleParams,
        geometry: GeometrySpec,
        signs: SignSequence,
    ) -> Result<Self> {
        let n = params.n;
        if signs.len() != n {
            return Err(Error::Parameter(format!("need {n} signs, got {}", signs.len())));
        }
        let dirs = build_directions(n, geometry)?;
        let len = 1.0 / params.big_n;
        let min_gap = dirs.min_gap();
        if len >= 0.25 * min_gap {
            return Err(Error::Invariant(format!(
                "arc length 1/N = {len:e} must be below a quarter of the minimal gap {min_gap:e}"
            )));
        }
        let arcs = dirs
            .angles()
            .iter()
            .map(|d| Arc::new(d.quarter_turns(-1), len))
            .collect::<Result<Vec<_>>>()?;
        let guards = dirs
            .angles()
            .iter()
            .map(|&d| Arc::new(d, 1.0 / (100.0 * n as f64)))
            .collect::<Result<Vec<_>>>()?;
        let c = solve_c(&arcs[0], dirs.angle(1))?;
        let atoms = arcs.iter().map(|a| make_w(a, c)).collect::<Result<Vec<_>>>()?;
        let omega = assemble_omega(&atoms, &signs)?;
        Ok(Self { params, dirs, arcs, guards, c, signs, atoms, omega })
    }

    pub fn n(&self) -> usize {
        self.params.n
    }

    pub fn big_n(&self) -> f64 {
        self.params.big_n
    }

    /// Direction `x_k/|x_k|`, 1-based.
    pub fn direction(&self, k: usize) -> Angle {
        self.dirs.angle(k)
    }

    /// Atom `w_k`, 1-based.
    pub fn atom(&self, k: usize) -> &ArcFunction {
        &self.atoms[k - 1]
    }

    /// Whether `x` lies in one of the four quarter-turn copies of `J_k`.
    pub fn in_guard_zone(&self, k: usize, x: Angle) -> bool {
        let g = &self.guards[k - 1];
        (0..4).any(|j| g.quarter_turns(j).contains(x))
    }

    /// Copy with every sign flipped.
    pub fn with_flipped_signs(&self) -> Result<Self> {
        let signs = self.signs.negated();
        let omega = assemble_omega(&self.atoms, &signs)?;
        Ok(Self { signs, omega, ..self.clone() })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    fn params(n: usize, big_n: f64) -> ScheduleParams {
        ScheduleParams { big_n, n }
    }

    #[test]
    fn atom_is_mean_zero_and_even() {
        let w = make_w(&Arc::new(Angle::ZERO, 0.01).unwrap(), 1.0).unwrap();
        assert_eq!(w.len(), 4);
        assert_eq!(w.integral(), 0.0);
        let s: f64 = w.pieces().iter().map(|p| p.coeff).sum();
        assert_eq!(s, 0.0);
        assert!(w.is_even(10_000));
        assert_eq!(w.evaluate(Angle::ZERO), -1.0);
        assert_eq!(w.evaluate(Angle::new(FRAC_PI_2)), 1.0);
        assert!(make_w(&Arc::new(Angle::ZERO, 0.5).unwrap(), 1.0).is_err());
    }

    #[test]
    fn signs_follow_the_displayed_sum() {
        let s = SignSequence::new(vec![1]).unwrap();
        assert_eq!(atom_sign(&s, 1), -1.0);
        assert_eq!(atom_sign(&s, 2), 1.0);
        let s = SignSequence::new(vec![1, -1]).unwrap();
        assert_eq!(atom_sign(&s, 3), 1.0);
        assert_eq!(atom_sign(&s, 4), -1.0);
        assert!(SignSequence::new(vec![1, 0]).is_err());
    }

    #[test]
    fn single_pair_omega() {
        let cons = Construction::with_signs(
            params(1, 1e4),
            GeometrySpec::auto(),
            SignSequence::all_plus(1),
        )
        .unwrap();
        let expected =
            ArcFunction::disjoint_sum([&cons.atoms[0].scaled(-1.0), &cons.atoms[1]]).unwrap();
        assert_eq!(cons.omega, expected);
        assert_eq!(cons.omega.evaluate(Angle::new(0.3)), 0.0);
        assert!(cons.omega.integral().abs() < 1e-12);
    }

    #[test]
    fn structure_of_omega() {
        let cons = Construction::new(params(8, 2f64.powi(32)), GeometrySpec::auto()).unwrap();
        assert_eq!(cons.omega.len(), 64);
        assert!(cons.omega.is_even(10_000));
        assert!(cons.omega.integral().abs() < 1e-12);
        let measure = cons.omega.support_measure();
        let expected = 64.0 / cons.big_n();
        assert!(((measure - expected) / expected).abs() < 1e-12);
        assert!(cons.omega.pieces().iter().all(|p| p.coeff.abs() == cons.c));
        // Rotation is an isometry: x̃_k gaps equal x_k gaps.
        for k in 1..cons.arcs.len() {
            let g1 = cons.arcs[k].center().chord(cons.arcs[k - 1].center());
            let g2 = cons.direction(k + 1).chord(cons.direction(k));
            assert!((g1 - g2).abs() < 1e-15);
        }
        assert!(cons.in_guard_zone(3, cons.direction(3)));
        assert!(cons.in_guard_zone(3, cons.direction(3).quarter_turns(2)));
        assert!(!cons.in_guard_zone(3, cons.direction(4)));
    }

    #[test]
    fn rejects_arcs_too_long_for_the_gaps() {
        let err = Construction::new(params(8, 100.0), GeometrySpec::auto()).unwrap_err();
        assert!(matches!(err, Error::Invariant(_)), "{err}");
    }
}
