from django.apps import AppConfig


class FreqlatticeConfig(AppConfig):
    name = 'freqlattice'
    verbose_name = 'Frequency lattices'
