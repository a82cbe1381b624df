from django.apps import AppConfig


class PolycoreConfig(AppConfig):
    name = 'polycore'
    verbose_name = 'Sparse polynomial arithmetic'
