"""Problem parameters and numerical tolerances."""
from dataclasses import dataclass, field, fields, replace, asdict
import math

THETA_W = math.pi / 4      # half-opening angle of the right-angle wedge
NU = math.sqrt(2.0)        # refractive index of the lemniscatic configuration
RHO = 1.0                  # impedance-matched density ratio


@dataclass(frozen=True)
class Tolerances:
    tol_ell: float = 1e-10
    tol_curve: float = 1e-12
    tol_tbl: float = 1e-9
    tol_eval: float = 1e-8
    pole_guard: float = 1e-8
    tol_fd: float = 1e-6

    def override(self, **kw):
        names = {f.name for f in fields(self)}
        bad = set(kw) - names
        if bad:
            raise KeyError(f"unknown tolerance(s): {sorted(bad)}")
        return replace(self, **{k: float(v) for k, v in kw.items()})


@dataclass(frozen=True)
class WedgeConfig:
    """Incident angle ``theta_i`` (radians), absorption shift ``eps`` and wavenumber ``k0``."""
    theta_i: float
    eps: float = 1e-3
    k0: float = 1.0
    tol: Tolerances = field(default_factory=Tolerances)

    def __post_init__(self):
        if not self.k0 > 0:
            raise ValueError("k0 must be positive")

    @property
    def zeta_i(self):
        return complex(self.theta_i, self.eps)

    def with_eps(self, eps):
        return replace(self, eps=float(eps))

    def with_theta_i(self, theta_i):
        return replace(self, theta_i=float(theta_i))

    def with_k0(self, k0):
        return replace(self, k0=float(k0))

    def to_dict(self):
        d = asdict(self)
        d.update(theta_w=THETA_W, nu=NU, rho=RHO)
        return d
