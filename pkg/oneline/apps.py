from django.apps import AppConfig


class OnelineConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'oneline'
    verbose_name = 'Zeta on the 1-line'
