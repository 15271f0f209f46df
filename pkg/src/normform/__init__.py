"""Primes of the form u**2 + n*v**2 and the harmonic analysis of averages along them."""
from .errors import *  # noqa: F401,F403
from .quadfield import QuadField, build_field, class_number, norm_form
from .ideals import (IdealFactorization, PrimeIdealTag, enumerate_ideals, ideal_sums, mobius,
                     splitting_type, tau, type2_coefficients, vaughan_check, von_mangoldt)
from .normprimes import (PnSieve, build_sieve, density_report, is_member, pn_residue_density,
                         read_cache, residue_form_count, weighted_count, write_cache)
from .expsums import (IntPolynomial, ReducedFraction, coefficient, decay_scan, invariance_check,
                      phi2, phi2_raw, weyl_sum)
from .spectrum import (ArcSpec, IWConfig, Mollifier, iw_base_set, iw_frequencies, iw_height,
                       khat, lhat, lhat_dyadic, lhat_prime, major_arc_residual, minor_arc_scan,
                       osc_integral, sup_error_scan)
from .averages import Signal, ToySystem, avg_sequence, ergodic_avg, kernel, maximal_fn
from .varops import (OpSpec, inequality_suite, jump_count, long_short_split, oscillation,
                     v_variation, weight_transfer)

__version__ = "0.1.0"
