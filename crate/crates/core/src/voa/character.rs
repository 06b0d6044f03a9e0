//! Graded dimensions of irreducible modules of rational VOAs.

use serde::Serialize;

use crate::Rational;

/// One irreducible module: its lowest conformal weight and level dimensions.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ModuleCharacter {
    pub label: String,
    pub lowest_weight: String,
    pub dims: Vec<usize>,
}

/// All irreducible modules of a rational VOA with level dimensions `0..=K`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CharacterTable {
    pub algebra: String,
    pub modules: Vec<ModuleCharacter>,
}

/// Level dimensions of the minimal-model module `(r, s)` of `M(p, p')`, from
/// the alternating sum over the embedding diagram divided by the partition
/// generating function.
pub fn minimal_model_dims(p: i64, pp: i64, r: i64, s: i64, max_level: usize) -> Vec<usize> {
    let k_max = max_level as i64 + 1;
    let mut numer = vec![0i64; max_level + 1];
    for k in -k_max..=k_max {
        let a = p * pp * k * k + k * (pp * r - p * s);
        let b = p * pp * k * k + k * (pp * r + p * s) + r * s;
        if (0..=max_level as i64).contains(&a) {
            numer[a as usize] += 1;
        }
        if (0..=max_level as i64).contains(&b) {
            numer[b as usize] -= 1;
        }
    }
    // multiply by Π 1/(1-q^n)
    for n in 1..=max_level {
        for d in n..=max_level {
            numer[d] += numer[d - n];
        }
    }
    numer.into_iter().map(|x| usize::try_from(x).expect("nonnegative level dimension")).collect()
}

/// `h_{r,s}` of `M(p, p')`.
pub fn minimal_model_weight(p: i64, pp: i64, r: i64, s: i64) -> Rational {
    let num = (pp * r - p * s).pow(2) - (pp - p).pow(2);
    Rational::new(num.into(), (4 * p * pp).into())
}

impl CharacterTable {
    /// The three irreducible modules of the simple Virasoro VOA at `c = 1/2`.
    pub fn ising(max_level: usize) -> Self {
        let modules = [(1, 1), (1, 3), (1, 2)]
            .into_iter()
            .map(|(r, s)| {
                let h = minimal_model_weight(3, 4, r, s);
                ModuleCharacter {
                    label: format!("L(1/2,{h})"),
                    lowest_weight: h.to_string(),
                    dims: minimal_model_dims(3, 4, r, s, max_level),
                }
            })
            .collect();
        Self { algebra: "ising".into(), modules }
    }

    pub fn max_level(&self) -> usize {
        self.modules.iter().map(|m| m.dims.len()).min().unwrap_or(0).saturating_sub(1)
    }

    /// `Σ_{l ≤ min(m,n)} Σ_i dim W^i(m-l) · dim W^i(n-l)`.
    pub fn hom_dimension(&self, n: usize, m: usize) -> usize {
        (0..=n.min(m)).map(|l| self.modules.iter().map(|w| w.dims[m - l] * w.dims[n - l]).sum::<usize>()).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Coefficients of `Π_{n≥1} (1 + q^{n - 1/2})` in powers of `q^{1/2}`.
    fn half_integer_fermions(max_half: usize) -> Vec<usize> {
        let mut c = vec![0usize; max_half + 1];
        c[0] = 1;
        for odd in (1..=max_half).step_by(2) {
            for d in (odd..=max_half).rev() {
                c[d] += c[d - odd];
            }
        }
        c
    }

    /// Coefficients of `Π_{n≥1} (1 + q^n)`.
    fn integer_fermions(max: usize) -> Vec<usize> {
        let mut c = vec![0usize; max + 1];
        c[0] = 1;
        for n in 1..=max {
            for d in (n..=max).rev() {
                c[d] += c[d - n];
            }
        }
        c
    }

    #[test]
    fn ising_agrees_with_free_fermion_products() {
        let k = 12;
        let t = CharacterTable::ising(k);
        let half = half_integer_fermions(2 * k + 1);
        let vac: Vec<usize> = (0..=k).map(|j| half[2 * j]).collect();
        let energy: Vec<usize> = (0..=k).map(|j| half[2 * j + 1]).collect();
        assert_eq!(t.modules[0].dims, vac);
        assert_eq!(t.modules[1].dims, energy);
        assert_eq!(t.modules[2].dims, integer_fermions(k));
        assert_eq!(t.modules[0].lowest_weight, "0");
        assert_eq!(t.modules[1].lowest_weight, "1/2");
        assert_eq!(t.modules[2].lowest_weight, "1/16");
    }

    #[test]
    fn ising_low_levels() {
        let t = CharacterTable::ising(6);
        assert_eq!(t.modules[0].dims, vec![1, 0, 1, 1, 2, 2, 3]);
        assert_eq!(t.modules[1].dims, vec![1, 1, 1, 1, 2, 2, 3]);
        assert_eq!(t.modules[2].dims, vec![1, 1, 1, 2, 2, 3, 4]);
    }

    #[test]
    fn hom_dimensions() {
        let t = CharacterTable::ising(4);
        assert_eq!(t.hom_dimension(0, 0), 3);
        assert_eq!(t.hom_dimension(1, 0), 2);
        assert_eq!(t.hom_dimension(0, 1), 2);
        assert_eq!(t.hom_dimension(1, 1), 5);
    }
}
