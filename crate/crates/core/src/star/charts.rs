use crate::matrix::Matrix;
use crate::qseries::QSeries;
use crate::weyl_element::{WElement, WMonomial};

/// `π*`: a function series as a `p`-free Weyl element (`deg` = `λ`-power).
pub fn pi_star(f: &QSeries) -> WElement {
    f.as_welement().clone()
}

/// `ι*`: sets the momenta to zero.
pub fn iota_star(a: &WElement) -> QSeries {
    let terms = a
        .terms()
        .filter(|(m, _)| m.p.is_zero())
        .map(|(m, c)| (WMonomial::new(m.lambda, m.p.clone(), m.q.clone()), c.clone()));
    let w = WElement::from_terms(a.dim(), a.truncation(), terms).expect("same dimension");
    QSeries::from_welement(w).expect("p-free by construction")
}

pub fn pi_star_matrix(f: &Matrix<QSeries>) -> Matrix<WElement> {
    f.map(pi_star)
}

pub fn iota_star_matrix(a: &Matrix<WElement>) -> Matrix<QSeries> {
    a.map(iota_star)
}
