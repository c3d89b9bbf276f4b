//! Contact vector fields, the osp(1|2) basis, and weighted densities.
//!
//! A contact field is `X_H = H d/dx + (1/2) eta(H) etabar` for a
//! superfunction `H`; the assignment `H -> X_H` intertwines the contact
//! bracket with the field bracket. The subalgebra osp(1|2) is spanned by
//! the hamiltonians `1, x, x^2, theta, x*theta`; its even part, spanned by
//! the first three, is sl(2).
//!
//! A density of weight `lambda` transforms by
//! `L^lambda_{X_H}(F) = X_H(F) + lambda H' F`.

use crate::error::{Error, Result};
use crate::scalar::Rat;
use crate::superfield::{contact_bracket, Parity, SuperFn};

/// The five osp(1|2) basis generators, in the fixed global order.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Hash)]
pub enum Gen {
    One,
    X,
    X2,
    Theta,
    XTheta,
}

impl Gen {
    pub const ALL: [Gen; 5] = [Gen::One, Gen::X, Gen::X2, Gen::Theta, Gen::XTheta];
    pub const SL2: [Gen; 3] = [Gen::One, Gen::X, Gen::X2];

    pub fn index(self) -> usize {
        match self {
            Gen::One => 0,
            Gen::X => 1,
            Gen::X2 => 2,
            Gen::Theta => 3,
            Gen::XTheta => 4,
        }
    }

    pub fn parity(self) -> Parity {
        match self {
            Gen::One | Gen::X | Gen::X2 => Parity::Even,
            Gen::Theta | Gen::XTheta => Parity::Odd,
        }
    }

    pub fn hamiltonian(self) -> SuperFn {
        match self {
            Gen::One => SuperFn::one(),
            Gen::X => SuperFn::x(),
            Gen::X2 => SuperFn::monomial(2, false, Rat::one()),
            Gen::Theta => SuperFn::theta(),
            Gen::XTheta => SuperFn::monomial(1, true, Rat::one()),
        }
    }

    pub fn field(self) -> ContactField {
        ContactField::new(self.hamiltonian())
    }

    /// Eigenvalue of `ad(X_x)` on this generator.
    pub fn ad_x_weight(self) -> Rat {
        match self {
            Gen::One => Rat::from(-1i64),
            Gen::X => Rat::zero(),
            Gen::X2 => Rat::one(),
            Gen::Theta => -Rat::half(),
            Gen::XTheta => Rat::half(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Gen::One => "X_1",
            Gen::X => "X_x",
            Gen::X2 => "X_x^2",
            Gen::Theta => "X_theta",
            Gen::XTheta => "X_x*theta",
        }
    }
}

/// The contact vector field `X_H`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ContactField {
    pub h: SuperFn,
}

impl ContactField {
    pub fn new(h: SuperFn) -> Self {
        ContactField { h }
    }

    pub fn parity(&self) -> Result<Parity> {
        self.h.parity()
    }

    /// `X_H(F) = H F' + (1/2) eta(H) etabar(F)`.
    pub fn apply(&self, f: &SuperFn) -> SuperFn {
        let main = &self.h * &f.dx();
        let corr = (&self.h.eta() * &f.eta_bar()).scale(&Rat::half());
        &main + &corr
    }

    /// `[X_F, X_G] = X_{{F,G}}`.
    pub fn bracket(&self, other: &ContactField) -> ContactField {
        ContactField::new(contact_bracket(&self.h, &other.h))
    }
}

/// A weighted density `F alpha^lambda`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Density {
    pub value: SuperFn,
    pub weight: Rat,
}

impl Density {
    pub fn new(value: SuperFn, weight: Rat) -> Self {
        Density { value, weight }
    }
}

impl std::fmt::Display for Density {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let body = self.value.to_string();
        if body.contains(' ') {
            write!(f, "({body})*alpha^{}", self.weight)
        } else {
            write!(f, "{body}*alpha^{}", self.weight)
        }
    }
}

/// `L^lambda_{X_H}(F) = X_H(F) + lambda H' F`, weight preserved.
pub fn lie_derivative(x: &ContactField, d: &Density) -> Density {
    let main = x.apply(&d.value);
    let weighted = (&x.h.dx() * &d.value).scale(&d.weight);
    Density::new(&main + &weighted, d.weight.clone())
}

/// Leibnitz action on a tensor pair: the two legs of
/// `L(F) (x) G + (-1)^{|H||F|} F (x) L(G)`, with the Koszul sign folded
/// into the second leg.
pub fn lie_derivative_pair(
    x: &ContactField,
    f: &Density,
    g: &Density,
) -> Result<[(Density, Density); 2]> {
    let xp = x.parity()?;
    let sign = if xp == Parity::Odd {
        let fp = f.value.parity().map_err(|_| {
            Error::ParityMismatch("tensor leg must be parity-homogeneous under an odd field".into())
        })?;
        Parity::koszul(xp, fp)
    } else {
        Rat::one()
    };
    let first = (lie_derivative(x, f), g.clone());
    let second = (
        Density::new(f.value.scale(&sign), f.weight.clone()),
        lie_derivative(x, g),
    );
    Ok([first, second])
}

/// Expands a superfunction in the osp(1|2) hamiltonian basis
/// `[1, x, x^2, theta, x*theta]`; fails when it does not lie in the span.
pub fn expand_in_basis(f: &SuperFn) -> Result<[Rat; 5]> {
    if f.even.degree().unwrap_or(0) > 2 || f.odd.degree().unwrap_or(0) > 1 {
        return Err(Error::Bounds(format!(
            "{f} is not in the osp(1|2) hamiltonian span"
        )));
    }
    Ok([
        f.even.coeff(0),
        f.even.coeff(1),
        f.even.coeff(2),
        f.odd.coeff(0),
        f.odd.coeff(1),
    ])
}

/// All 15 unordered brackets over the ordered basis, each expanded in the
/// basis. Odd-odd entries are symmetric, the remaining ones antisymmetric.
pub fn structure_constants() -> Vec<((Gen, Gen), [Rat; 5])> {
    let mut table = Vec::new();
    for (i, &a) in Gen::ALL.iter().enumerate() {
        for &b in &Gen::ALL[i..] {
            let br = a.field().bracket(&b.field());
            let coeffs = expand_in_basis(&br.h)
                .expect("basis brackets stay in the basis span");
            table.push(((a, b), coeffs));
        }
    }
    table
}
