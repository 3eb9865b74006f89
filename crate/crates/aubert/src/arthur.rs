//! The A-parameter family `ψ = φ ⊕ (ρ ⊠ S_2x ⊠ S_2)^t` and its derivative engine.
//!
//! An [`AParamForm`] stands for `soc((ρ|·|^{-x})^s ⋊ π(ψ, l, η))`. The sign
//! character lives on the blocks of `φ`; `eta_psi` is `η(ρ ⊠ S_2x ⊠ S_2)`,
//! which only matters when `l = 0`.

use crate::error::{Error, Result};
use crate::halfint::HalfInt;
use crate::model::{GroupType, LanglandsDatum, Rho, Segment, Sign, TemperedData};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AParamForm {
    pub rho: Rho,
    pub x: HalfInt,
    pub s: u32,
    pub t: u32,
    /// Element of `Z/2Z`.
    pub l: u8,
    pub phi: TemperedData,
    pub eta_psi: Sign,
}

fn d_of(x: HalfInt) -> Option<u32> {
    u32::try_from(x.block_size()).ok().filter(|&d| d > 0)
}

impl AParamForm {
    fn is_half(&self) -> bool {
        self.x == HalfInt::HALF
    }

    /// `2x + 1`.
    pub fn d_plus(&self) -> u32 {
        d_of(self.x).expect("x > 0")
    }

    /// `2x - 1`; zero at `x = 1/2`.
    pub fn d_minus(&self) -> u32 {
        self.d_plus() - 2
    }

    /// `m = m_φ(ρ ⊠ S_{2x+1})`.
    pub fn m(&self) -> u32 {
        self.phi.mult(&self.rho, self.d_plus())
    }

    /// `m' = m_φ(ρ ⊠ S_{2x-1})`, formally `1` at `x = 1/2`.
    pub fn m_prime(&self) -> u32 {
        if self.is_half() {
            1
        } else {
            self.phi.mult(&self.rho, self.d_minus())
        }
    }

    /// `η(ρ ⊠ S_{2x-1})`, formally `+` at `x = 1/2`.
    fn eta_minus(&self) -> Option<Sign> {
        if self.is_half() {
            Some(Sign::Plus)
        } else {
            self.phi.sign(&self.rho, self.d_minus())
        }
    }

    fn eta_plus(&self) -> Option<Sign> {
        self.phi.sign(&self.rho, self.d_plus())
    }

    /// Restores the conventions: `l = 1` when `t = 0`, and `η(ρ ⊠ S_2x ⊠ S_2)`
    /// tied to the blocks when `l = 0`.
    fn normalize(&mut self) {
        if self.t == 0 {
            self.l = 1;
        }
        if self.l == 1 {
            self.eta_psi = Sign::Plus;
        } else if self.is_half() {
            self.eta_psi = Sign::Minus;
        } else if let Some(e) = self.eta_minus() {
            self.eta_psi = e;
        } else if let Some(e) = self.eta_plus() {
            self.eta_psi = e.times(Sign::pow_neg(self.t as i64));
        }
    }

    /// Checks membership in `Ŝ_{ψ,l}` and the hypotheses of the derivative formula.
    pub fn validate(&self) -> Result<()> {
        if !self.x.is_positive() {
            return Err(Error::precondition("A-parameter form needs x > 0"));
        }
        if self.is_half() && self.s != 0 {
            return Err(Error::precondition("s must vanish at x = 1/2"));
        }
        if self.l > 1 {
            return Err(Error::internal("l outside Z/2Z"));
        }
        let t_sign = Sign::pow_neg(self.t as i64);
        let z = self.phi.central_sign();
        if self.l == 1 || self.t == 0 {
            if z != Sign::Plus {
                return Err(Error::validation("η is nontrivial on z_φ"));
            }
        } else {
            if z != t_sign {
                return Err(Error::validation("η(z_φ) must equal (-1)^t when l = 0"));
            }
            if self.is_half() {
                if self.eta_plus().is_some_and(|e| e != t_sign) {
                    return Err(Error::validation("η(ρ ⊠ S_2) must equal (-1)^t when l = 0"));
                }
            } else {
                if self.eta_minus().is_some_and(|e| e != self.eta_psi) {
                    return Err(Error::validation("η(ρ ⊠ S_{2x-1}) disagrees with η_ψ"));
                }
                if self.eta_plus().is_some_and(|e| e.times(t_sign) != self.eta_psi) {
                    return Err(Error::validation("η(ρ ⊠ S_{2x+1}) disagrees with (-1)^t η_ψ"));
                }
            }
        }
        if self.m() > 0 && self.m_prime() > 0 {
            let prod = self.eta_minus().unwrap_or(Sign::Plus).times(self.eta_plus().unwrap_or(Sign::Plus));
            if prod != t_sign {
                return Err(Error::precondition("η(ρ ⊠ S_{2x-1}) η(ρ ⊠ S_{2x+1}) must be (-1)^t"));
            }
        }
        Ok(())
    }

    /// The segments `(ρ|·|^{-x})^s`, `Δ_ρ[x-1, -x]^{t'}` and the tempered part.
    pub fn expand(&self) -> Result<(Vec<Segment>, TemperedData)> {
        let mut temp = self.phi.clone();
        let mut copies = self.t;
        if self.l == 0 && self.t > 0 {
            copies -= 1;
            let t_sign = Sign::pow_neg(self.t as i64);
            if self.is_half() {
                temp.add(&self.rho, 2, 1, t_sign)?;
            } else {
                temp.add(&self.rho, self.d_minus(), 1, self.eta_psi)?;
                temp.add(&self.rho, self.d_plus(), 1, self.eta_psi.times(t_sign))?;
            }
        }
        let mut segments = Vec::new();
        for _ in 0..self.s {
            segments.push(Segment::point(self.rho.clone(), -self.x));
        }
        for _ in 0..copies {
            segments.push(Segment::new(self.rho.clone(), self.x - HalfInt::ONE, -self.x));
        }
        Ok((segments, temp))
    }
}

/// Reads `L(Δ_ρ[x-1, -x]^t; π(φ, η))` as `π(ψ, l, η)`.
pub fn to_aparam(t: u32, phi: &TemperedData, x: HalfInt, rho: &Rho) -> Result<AParamForm> {
    if !x.is_positive() {
        return Err(Error::precondition("A-parameter form needs x > 0"));
    }
    let mut a = AParamForm {
        rho: rho.clone(),
        x,
        s: 0,
        t,
        l: 1,
        phi: phi.clone(),
        eta_psi: Sign::Plus,
    };
    let dp = a.d_plus();
    let want = Sign::pow_neg(t as i64 + 1);
    if a.m() > 0 && a.m_prime() > 0 {
        let em = a.eta_minus().unwrap_or(Sign::Plus);
        let ep = a.eta_plus().unwrap_or(Sign::Plus);
        if em.times(ep) == want {
            a.phi.remove(rho, dp, 1)?;
            if !a.is_half() {
                a.phi.remove(rho, dp - 2, 1)?;
            }
            a.t += 1;
            a.l = 0;
            a.eta_psi = em;
        }
    }
    a.normalize();
    Ok(a)
}

/// `π(ψ, l, η)` with its `s` prefix, as a Langlands datum.
pub fn from_aparam(a: &AParamForm, group: GroupType) -> Result<LanglandsDatum> {
    let (segments, temp) = a.expand()?;
    Ok(LanglandsDatum::new(group, segments, temp))
}

/// Highest `ρ|·|^x`-derivative of `soc((ρ|·|^{-x})^s ⋊ π(ψ, l, η))`.
pub fn der_special(a: &AParamForm) -> Result<(u32, AParamForm)> {
    a.validate()?;
    let m = a.m();
    let mp = a.m_prime();
    let k = m + a.s.saturating_sub(mp);
    let mut out = a.clone();
    out.s = a.s.min(mp);
    if m > 0 {
        let new_sign = a.eta_plus().expect("m > 0").times(Sign::pow_neg(a.t as i64));
        out.phi.remove(&a.rho, a.d_plus(), m)?;
        if !a.is_half() {
            out.phi.add(&a.rho, a.d_minus(), m, new_sign)?;
        }
        out.l = ((a.l as u32 + m) % 2) as u8;
    }
    out.normalize();
    Ok((k, out))
}

/// `S^{(1)}_{ρ|·|^x}` of the same representation.
pub fn soc_special(a: &AParamForm) -> Result<AParamForm> {
    a.validate()?;
    let mut out = a.clone();
    if a.s < a.m_prime() {
        let new_sign = a.eta_minus().expect("m' > 0").times(Sign::pow_neg(a.t as i64));
        if !a.is_half() {
            out.phi.remove(&a.rho, a.d_minus(), 1)?;
        }
        out.phi.add(&a.rho, a.d_plus(), 1, new_sign)?;
        out.l = 1 - a.l;
    } else if a.is_half() {
        return Err(Error::internal("socle at x = 1/2 cannot grow s"));
    } else {
        out.s += 1;
    }
    out.normalize();
    Ok(out)
}

/// `m_ψ(ρ ⊠ S_{2x-1})` for the irreducibility criterion; at `x = 1/2` the
/// formal block `S_0` is present exactly on the `l = 1` branch.
pub fn m_psi_minus(a: &AParamForm) -> u32 {
    if a.is_half() {
        u32::from(a.l == 1 || a.t == 0)
    } else {
        a.m_prime()
    }
}

/// Condition (∗): every block of size `d ≥ 2` is simple, sits above `S_{d-2}`,
/// and alternates sign with it.
pub fn check_star(phi: &TemperedData, group: GroupType) -> bool {
    phi.blocks().iter().filter(|b| b.sign != Sign::Unset).all(|b| {
        if b.d < 2 {
            return true;
        }
        if b.mult != 1 {
            return false;
        }
        let below = if b.d == 2 {
            (b.rho.self_dual() != group.phi_type()).then_some(Sign::Plus)
        } else {
            phi.sign(&b.rho, b.d - 2).filter(|&s| s != Sign::Unset)
        };
        below.is_some_and(|s| s != b.sign)
    })
}

/// Dual of a tempered good-parity `π(φ, η)` satisfying (∗).
pub fn dual_tempered(phi: &TemperedData, group: GroupType) -> Result<(Vec<Segment>, TemperedData)> {
    if !check_star(phi, group) {
        return Err(Error::precondition(format!("{phi} violates condition (∗)")));
    }
    let mut out = phi.clone();
    let mut segments = Vec::new();
    let mut flipped = Vec::new();
    for rho in phi.rhos() {
        let m1 = phi.blocks_of(&rho).find(|b| b.d == 1 && b.sign != Sign::Unset).map_or(0, |b| b.mult);
        if m1 == 0 || m1 % 2 != 0 {
            continue;
        }
        let top = phi
            .blocks_of(&rho)
            .filter(|b| b.sign != Sign::Unset)
            .map(|b| b.d)
            .max()
            .unwrap_or(1);
        if top > 1 {
            out.remove(&rho, 1, 1)?;
            out.remove(&rho, top, 1)?;
            let y = HalfInt::from_twice(top as i64 - 1);
            segments.push(Segment::new(rho.clone(), HalfInt::ZERO, -y));
        }
        flipped.push(rho);
    }
    out.map_signs(|b| if flipped.contains(&b.rho) { b.sign.flip() } else { b.sign });
    Ok((segments, out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_rep, Decls};

    fn sp() -> Decls {
        Decls::standard(GroupType::SpEven)
    }

    fn temp(s: &str) -> TemperedData {
        parse_rep(s, &sp()).unwrap().temp
    }

    fn one() -> Rho {
        sp().rho("1").unwrap().clone()
    }

    #[test]
    fn branch_selection_follows_signs() {
        let a = to_aparam(0, &temp("pi(1-,1-,3+)"), HalfInt::ONE, &one()).unwrap();
        assert_eq!((a.t, a.l, a.eta_psi), (1, 0, Sign::Minus));
        assert_eq!(a.phi.to_string(), "pi(1-)");
        let b = to_aparam(1, &temp("pi(3+)"), HalfInt::ONE, &one()).unwrap();
        assert_eq!((b.t, b.l), (1, 1));
        let c = to_aparam(0, &temp("pi(3+,5-,5-)"), HalfInt::ONE, &one()).unwrap();
        assert_eq!(c.l, 1);
    }

    #[test]
    fn from_aparam_names_the_expected_data() {
        let a = AParamForm {
            rho: one(),
            x: HalfInt::ONE,
            s: 0,
            t: 1,
            l: 1,
            phi: temp("pi(1+)"),
            eta_psi: Sign::Plus,
        };
        assert_eq!(from_aparam(&a, GroupType::SpEven).unwrap().to_string(), "L(D[0,-1];pi(1+))");
        let b = AParamForm { x: HalfInt::int(2), s: 1, t: 0, phi: temp("pi(3+)"), ..a };
        assert_eq!(from_aparam(&b, GroupType::SpEven).unwrap().to_string(), "L(D[-2,-2];pi(3+))");
    }

    #[test]
    fn derivative_lowers_top_block() {
        let a = to_aparam(0, &temp("pi(3+)"), HalfInt::ONE, &one()).unwrap();
        let (k, d) = der_special(&a).unwrap();
        assert_eq!(k, 1);
        assert_eq!(from_aparam(&d, GroupType::SpEven).unwrap().to_string(), "pi(1+)");
        let a = to_aparam(0, &temp("pi(1+,1+,3+)"), HalfInt::ONE, &one()).unwrap();
        let (k, d) = der_special(&a).unwrap();
        assert_eq!(k, 1);
        assert_eq!(from_aparam(&d, GroupType::SpEven).unwrap().to_string(), "pi(1+,1+,1+)");
    }

    #[test]
    fn socle_inverts_derivative() {
        let a = to_aparam(0, &temp("pi(1-,1-,3+)"), HalfInt::ONE, &one()).unwrap();
        let up = soc_special(&a).unwrap();
        assert_eq!(from_aparam(&up, GroupType::SpEven).unwrap().to_string(), "L(D[0,-1];pi(3+))");
        let (k0, _) = der_special(&a).unwrap();
        let (k1, back) = der_special(&up).unwrap();
        assert_eq!(k1, k0 + 1);
        let (_, base) = der_special(&a).unwrap();
        assert_eq!(back, base);
    }

    #[test]
    fn condition_star() {
        let g = GroupType::SpEven;
        assert!(check_star(&temp("pi(1-,1-,3+)"), g));
        assert!(check_star(&temp("pi(1+,1+,1+)"), g));
        assert!(!check_star(&temp("pi(1+,3+,3+)"), g));
        assert!(!check_star(&temp("pi(1+,1+,3+)"), g));
    }

    #[test]
    fn tempered_duals() {
        let g = GroupType::SpEven;
        let (segs, t) = dual_tempered(&temp("pi(1-,1-,3+)"), g).unwrap();
        let d = LanglandsDatum::new(g, segs, t);
        assert_eq!(d.to_string(), "L(D[0,-1];pi(1+))");
        let (segs, t) = dual_tempered(&temp("pi(1+,1+,1+)"), g).unwrap();
        assert!(segs.is_empty());
        assert_eq!(t.to_string(), "pi(1+,1+,1+)");
    }
}
