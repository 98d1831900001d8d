"""
Exception hierarchy for the random dynamical systems services.

Every failure a numerical operation can report is a subclass of
`RDSError`. Each class carries a stable `code` string so front ends
(command line and HTTP) can report the failing stage without parsing
messages.

This file is part of RandomCenter project.

RandomCenter is free software: you can redistribute it and/or
modify it under the terms of the GNU General Public License as
published by the Free Software Foundation, either version 3 of
the License, or (at your option) any later version.

RandomCenter is distributed in the hope that it will be useful,
but WITHOUT ANY WARRANTY; without even the implied warranty of
MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE. See the GNU
General Public License for more details.

You should have received a copy of the GNU General Public License
along with RandomCenter. If not, see <https://www.gnu.org/licenses/>.
"""

from typing import Any, Optional


class RDSError(Exception):
	"""Base class for every error raised by the numerical services."""

	code = 'rds-error'


class InvalidArgumentError(RDSError, ValueError):
	"""Raised when an argument is outside the domain of an operation."""

	code = 'invalid-argument'


class NumericalFailureError(RDSError):
	"""Raised when a matrix or vector becomes non-finite or singular."""

	code = 'numerical-failure'


class LinearizationFailureError(RDSError):
	"""Raised when a finite-difference differential is not consistent.

	The remainder of the linearization must vanish faster than the
	displacement along a shrinking ladder. When it does not, the map is
	not differentiable at the stationary point (or the step is badly
	tuned) and nothing downstream can be trusted.
	"""

	code = 'linearization-failure'


class OutsideValidityRadiusError(RDSError):
	"""Raised when a remainder is requested outside the radius R."""

	code = 'outside-validity-radius'


class NoCenterExponentError(RDSError):
	"""Raised when the spectrum has no exponent within the zero band."""

	code = 'no-center-exponent'


class SplittingNotConvergedError(RDSError):
	"""Raised when the subspace-angle Cauchy test does not converge."""

	code = 'splitting-not-converged'


class NotInvertibleDirectionError(RDSError):
	"""Raised when a restricted inverse receives a stable component."""

	code = 'not-invertible-direction'


class ParametersInfeasibleError(RDSError):
	"""Raised when the rates violate the contraction sign conditions."""

	code = 'parameters-infeasible'


class RadiusFailureError(RDSError):
	"""Raised when the cutoff radius cannot be computed."""

	code = 'radius-failure'


class NotInCenterError(RDSError):
	"""Raised when a vector given as center data leaves the center."""

	code = 'not-in-center'


class FixedPointNotConvergedError(RDSError):
	"""Raised when the Picard iteration exhausts its iterations.

	Attributes:
	    report (Optional[Any]): Solver report of the failed run, with
	        the residual history and the empirical contraction ratio.

	"""

	code = 'fixed-point-not-converged'

	def __init__(self, message: str, report: Optional[Any] = None):
		"""Initialize the error with the solver report.

		Args:
		    message (str): Human readable description.
		    report (Optional[Any]): Report of the failed solve.

		"""
		super().__init__(message)
		self.report = report


class FitFailureError(RDSError):
	"""Raised when a polynomial fit is ill conditioned or underdetermined."""

	code = 'fit-failure'
