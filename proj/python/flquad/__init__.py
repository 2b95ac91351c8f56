"""Feedback-linearized quadrotor model, simulator and verification suite."""

from ._flquad import *  # noqa: F401,F403
from ._flquad import __doc__  # noqa: F401
