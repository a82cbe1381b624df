import json

from django.core.exceptions import ValidationError as DjangoValidationError
from rest_framework import serializers

from polycore.serializers import ComplexField

from .models import SchurData


class SchurModelSerializer(serializers.Serializer):
    """Model file {"d": 2, "r": [[0, 0], [0.3, 0], [0, -0.4]], "nu": [1, 2]}; nu is 1-based."""

    d = serializers.IntegerField(min_value=1)
    r = serializers.ListField(child=ComplexField(), allow_empty=False)
    nu = serializers.ListField(child=serializers.IntegerField(min_value=1), allow_empty=True)

    def validate(self, attrs):
        try:
            SchurData(attrs['d'], attrs['r'], attrs['nu'])
        except DjangoValidationError as exc:
            raise serializers.ValidationError(exc.message_dict if hasattr(exc, 'error_dict') else exc.messages)
        return attrs

    def create(self, validated_data):
        return SchurData(validated_data['d'], validated_data['r'], validated_data['nu'])

    def to_representation(self, instance):
        return {
            'd': instance.dimension,
            'r': [ComplexField().to_representation(value) for value in instance.r],
            'nu': list(instance.nu),
        }


def load_schur_model(path):
    """Read and validate a JSON model file."""
    with open(path, encoding='utf-8') as handle:
        serializer = SchurModelSerializer(data=json.load(handle))
    serializer.is_valid(raise_exception=True)
    return serializer.save()
