from django.db import models

from .balls import VERDICT_CHOICES, shortest_decimal


class VerificationRun(models.Model):
    """Configuration of one `verify --save` scan"""
    SPACING_CHOICES = [
        ('linear', 'Linear'),
        ('log', 'Logarithmic'),
    ]

    t_min = models.CharField(max_length=40)
    t_max = models.CharField(max_length=40)
    steps = models.PositiveIntegerField()
    spacing = models.CharField(max_length=6, choices=SPACING_CHOICES, default='linear')
    verified_height = models.CharField(max_length=40, help_text="T, the height RH is assumed verified to")
    delta = models.CharField(max_length=40)
    prec = models.PositiveIntegerField(help_text="Working precision in bits")
    zeros_path = models.CharField(max_length=500, blank=True)
    relaxed = models.BooleanField(default=False)
    created_at = models.DateTimeField(auto_now_add=True)

    class Meta:
        ordering = ['-created_at']

    def __str__(self):
        return f"[{self.t_min}, {self.t_max}] x{self.steps} @ {self.prec} bits"

    @classmethod
    def from_config(cls, cfg):
        return cls.objects.create(
            t_min=cfg.t_min,
            t_max=cfg.t_max,
            steps=cfg.steps,
            spacing=cfg.spacing,
            verified_height=cfg.T,
            delta=cfg.delta,
            prec=cfg.prec,
            zeros_path=cfg.zeros_path or '',
            relaxed=cfg.relaxed,
        )

    def save_records(self, records):
        outcomes = []
        for position, record in enumerate(records):
            fields = {}
            for name in ('computed', 'bound', 'margin'):
                ball = getattr(record, name)
                fields[f'{name}_mid'] = shortest_decimal(ball.mid, ball.prec) if ball else ''
                fields[f'{name}_rad'] = shortest_decimal(ball.rad, ball.prec) if ball else ''
            outcomes.append(VerificationOutcome(
                run=self,
                position=position,
                t=record.t,
                quantity=record.quantity,
                verdict=record.verdict,
                reason=record.reason,
                **fields,
            ))
        return VerificationOutcome.objects.bulk_create(outcomes)


class VerificationOutcome(models.Model):
    """One (t, quantity) record of a saved run"""
    run = models.ForeignKey(VerificationRun, on_delete=models.CASCADE, related_name='outcomes')
    position = models.PositiveIntegerField(help_text="Index of the record in grid order")
    t = models.CharField(max_length=40)
    quantity = models.CharField(max_length=12)
    computed_mid = models.CharField(max_length=160, blank=True)
    computed_rad = models.CharField(max_length=40, blank=True)
    bound_mid = models.CharField(max_length=160, blank=True)
    bound_rad = models.CharField(max_length=40, blank=True)
    margin_mid = models.CharField(max_length=160, blank=True)
    margin_rad = models.CharField(max_length=40, blank=True)
    verdict = models.CharField(max_length=20, choices=VERDICT_CHOICES)
    reason = models.TextField(blank=True)

    class Meta:
        ordering = ['run', 'position']
        unique_together = ['run', 'position']

    def __str__(self):
        return f"{self.quantity} at t={self.t}: {self.verdict}"
