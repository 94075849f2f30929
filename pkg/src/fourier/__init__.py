# Fourier package initialization
from src.fourier.profile import (ProfileFunction, constant, mu, normalize_profile, omega2,
                                 second_diff_l2, semicircle, tent)
from src.fourier.spectrum import RaySpectrum, profile_spectrum, ray_spectrum
from src.fourier.transforms import ft_body, ft_profile
from src.fourier.verifiers import (check_annulus, check_bilateral, check_chord_majorant,
                                   check_podkorytov, check_ray_lower, check_tail)

__all__ = [
    "ProfileFunction", "RaySpectrum",
    "tent", "semicircle", "constant", "normalize_profile",
    "mu", "second_diff_l2", "omega2", "ft_profile", "ft_body",
    "ray_spectrum", "profile_spectrum",
    "check_podkorytov", "check_bilateral", "check_tail", "check_ray_lower",
    "check_annulus", "check_chord_majorant",
]
