import json

from django.core.exceptions import ValidationError as DjangoValidationError
from rest_framework import serializers

from .models import RunConfig


class RunConfigSerializer(serializers.Serializer):
    """
    Run configuration file. Every field is optional; omitted fields keep the
    bundled fixtures and the values configured in settings, and
    ``tolerances`` only overrides the keys it names.
    """

    schur_fixtures = serializers.ListField(child=serializers.CharField(), required=False)
    media = serializers.ListField(child=serializers.CharField(), required=False)
    lattice_inputs = serializers.ListField(child=serializers.CharField(), required=False)
    grid_points = serializers.IntegerField(min_value=2, required=False)
    grid_points_3d = serializers.IntegerField(min_value=2, required=False)
    taylor_degree = serializers.IntegerField(min_value=0, required=False)
    eigen_max = serializers.IntegerField(min_value=0, required=False)
    l_schedule = serializers.ListField(child=serializers.FloatField(), allow_empty=False, required=False)
    seed = serializers.IntegerField(required=False)
    tolerances = serializers.DictField(child=serializers.FloatField(min_value=0), required=False)
    parallel = serializers.BooleanField(required=False)
    timings = serializers.BooleanField(required=False)
    threads = serializers.IntegerField(min_value=1, required=False)

    def validate(self, attrs):
        try:
            RunConfig.from_settings(**attrs)
        except DjangoValidationError as exc:
            raise serializers.ValidationError(exc.message_dict if hasattr(exc, 'error_dict') else exc.messages)
        return attrs

    def create(self, validated_data):
        return RunConfig.from_settings(**validated_data)


class CheckRecordSerializer(serializers.Serializer):
    name = serializers.CharField()
    value = serializers.FloatField(allow_null=True)
    reference = serializers.FloatField(allow_null=True)
    tolerance = serializers.FloatField(allow_null=True)
    passed = serializers.BooleanField()
    detail = serializers.CharField(allow_blank=True)
    runtime = serializers.FloatField(allow_null=True)


class ReportSerializer(serializers.Serializer):
    passed = serializers.BooleanField()
    checks = CheckRecordSerializer(many=True, source='records')


def load_run_config(path=None, **overrides):
    """RunConfig from an optional JSON file; ``overrides`` take precedence over the file."""
    payload = {}
    if path is not None:
        with open(path, encoding='utf-8') as handle:
            payload = json.load(handle)
    serializer = RunConfigSerializer(data={**payload, **overrides})
    serializer.is_valid(raise_exception=True)
    return serializer.save()
