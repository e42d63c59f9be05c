from .testsettingsmanager import *  # noqa
