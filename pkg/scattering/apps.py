from django.apps import AppConfig


class ScatteringConfig(AppConfig):
    name = 'scattering'
    verbose_name = 'Scattering polynomials and weights'
