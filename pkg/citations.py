# citations.py

# Formula identifiers embedded in every report, with the statement each one stands for.
citations = {
    "sbar-definition": "s̄_p = sup{s > 0 : S ⊆ W^s_p}",
    "alphabar-definition": "ᾱ_p = sup{α > 0 : S ⊆ B^α_{τ,τ}, 1/τ = α/d + 1/p}",
    "adaptivity-scale": "1/τ = α/d + 1/p",
    "z-sbar-alpha-chain": "z ≤ s̄_p ≤ ᾱ_p",
    "mu-definition": "μ = s̄_p − d(1/p − 1/p_z)",
    "alpha-upper-bound": "ᾱ_p ≤ s̄_p(s̄_p − μ)/(z − μ) when z > μ",
    "no-bound-below-mu": "z ≤ μ: no non-trivial bound for ᾱ_p",
    "sbar-lower-bound": "s̃_p = ᾱ_p(z + d(1/p − 1/p_z))/(ᾱ_p + d(1/p − 1/p_z))",
    "sbar-transfer": "s̄_{p̂} bounded by the line through (1/p_z, z) and (1/p, s̄_p)",
    "poisson-input-regularity": "S ⊆ B^r_{q,q} for 0 < r < 1 + 1/q, 0 < 1/q < (d+1)/(d−1)",
    "poisson-indices": "s̄_p = 1 + 1/p, ᾱ_p = (1 + 1/p)·d/(d−1)",
    "poisson-interpolation": "[B^s_{p,p}, B^r_{q,q}]_θ = B^2_{1,1}",
    "poisson-sharpness-line": "(1/2, 3/2), (1, 2) and (ᾱ/d + 1/p, ᾱ) lie on y = x + 1",
    "ppoisson-pz": "p_z = p/(1 − (2−p)/(2d))",
    "ppoisson-case-split": "case 1: 3/2 ≤ s̄_p < 1 + 1/p; case 2: 1 + 1/p ≤ s̄_p",
    "ppoisson-shat": "ŝ_p(α) = (1 + 1/p)α/(α + 1/p − 1/2)",
    "grisvard-polygon": "s̄_p = 2/p + π/κ₀",
    "stokes-admissible-p": "1/2 − min{ε/2, σ/(d−1)} ≤ 1/p ≤ 1/2",
    "stokes-data-chain": "H^{s−3/2+σ} ↪ F^{s−3/2+σ}_{2,2} ↪ F^{s₁}_{p,2} ↪ F^{s+1/p−2}_{p,2}",
    "stokes-bound": "ᾱ₂ ≤ s̄₂·d/(d−1)·m/(3/2 + m − s̄₂), m = min{(d−1)ε/2, σ}",
}


def get_citation(key):
    if key in citations:
        return citations[key]
    else:
        return None
