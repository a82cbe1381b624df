from django.apps import AppConfig


class LayeredConfig(AppConfig):
    name = 'layered'
    verbose_name = 'Layered media'
