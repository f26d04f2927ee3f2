"""Quiver gauge theories, slant sums, exact vertex functions and their factorization checks."""
from ._version import __version__, build_id
from .scalars import *          # noqa: F401,F403
from .series import *           # noqa: F401,F403
from .theory import *           # noqa: F401,F403
from .kacmoody import *         # noqa: F401,F403
from .fixedpoints import *      # noqa: F401,F403
from .vertex import *           # noqa: F401,F403
from .deformation import *      # noqa: F401,F403
from .verifiers import *        # noqa: F401,F403
from .io import *               # noqa: F401,F403
