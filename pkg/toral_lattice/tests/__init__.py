from .test_maps import *  # noqa
from .test_lattice import *  # noqa
from .test_discretize import *  # noqa
from .test_entropy import *  # noqa
from .test_fields import *  # noqa
from .test_forms import *  # noqa
from .test_cli import *  # noqa
