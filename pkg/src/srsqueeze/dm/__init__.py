"""Density-matrix engine for multilevel atoms driven by elliptically polarized light."""

from .angular import clebsch_gordan, wigner_6j
from .levels import LevelScheme, State, fine_structure_scheme, hyperfine_scheme
from .liouville import DriveSpec, LiouvilleSystem, build_system, steady_state
from .response import (DMResponse, doppler_average, extract_response, linear_response,
                       medium_response)
