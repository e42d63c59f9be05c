# Mirror runtests.py so the Django-based test cases run under plain pytest.
import os

import django

os.environ.setdefault("DJANGO_SETTINGS_MODULE", "test_settings")
django.setup()
