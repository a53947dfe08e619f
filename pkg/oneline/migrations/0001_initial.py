# Generated by Django 5.2.5 on 2026-10-19 09:12

import django.db.models.deletion
from django.db import migrations, models


class Migration(migrations.Migration):

    initial = True

    dependencies = [
    ]

    operations = [
        migrations.CreateModel(
            name='VerificationRun',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('t_min', models.CharField(max_length=40)),
                ('t_max', models.CharField(max_length=40)),
                ('steps', models.PositiveIntegerField()),
                ('spacing', models.CharField(choices=[('linear', 'Linear'), ('log', 'Logarithmic')], default='linear', max_length=6)),
                ('verified_height', models.CharField(help_text='T, the height RH is assumed verified to', max_length=40)),
                ('delta', models.CharField(max_length=40)),
                ('prec', models.PositiveIntegerField(help_text='Working precision in bits')),
                ('zeros_path', models.CharField(blank=True, max_length=500)),
                ('relaxed', models.BooleanField(default=False)),
                ('created_at', models.DateTimeField(auto_now_add=True)),
            ],
            options={
                'ordering': ['-created_at'],
            },
        ),
        migrations.CreateModel(
            name='VerificationOutcome',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('position', models.PositiveIntegerField(help_text='Index of the record in grid order')),
                ('t', models.CharField(max_length=40)),
                ('quantity', models.CharField(max_length=12)),
                ('computed_mid', models.CharField(blank=True, max_length=160)),
                ('computed_rad', models.CharField(blank=True, max_length=40)),
                ('bound_mid', models.CharField(blank=True, max_length=160)),
                ('bound_rad', models.CharField(blank=True, max_length=40)),
                ('margin_mid', models.CharField(blank=True, max_length=160)),
                ('margin_rad', models.CharField(blank=True, max_length=40)),
                ('verdict', models.CharField(choices=[('certified_ok', 'Certified OK'), ('certified_violation', 'Certified violation'), ('undecided', 'Undecided')], max_length=20)),
                ('reason', models.TextField(blank=True)),
                ('run', models.ForeignKey(on_delete=django.db.models.deletion.CASCADE, related_name='outcomes', to='oneline.verificationrun')),
            ],
            options={
                'ordering': ['run', 'position'],
                'unique_together': {('run', 'position')},
            },
        ),
    ]
