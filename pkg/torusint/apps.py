from django.apps import AppConfig


class TorusintConfig(AppConfig):
    name = 'torusint'
    verbose_name = 'Integration on the torus'
