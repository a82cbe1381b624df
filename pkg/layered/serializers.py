import json

from django.core.exceptions import ValidationError as DjangoValidationError
from rest_framework import serializers

from .models import LayeredMedium


class MediumSerializer(serializers.Serializer):
    """Medium file {"b": 4.0, "y": [0.3, 1.0, 2.41421356], "a": [1.0, 2.0, 0.8, 1.5]}."""

    b = serializers.FloatField()
    y = serializers.ListField(child=serializers.FloatField(), allow_empty=False)
    a = serializers.ListField(child=serializers.FloatField(), allow_empty=False)

    def validate(self, attrs):
        try:
            LayeredMedium(attrs['b'], attrs['y'], attrs['a'])
        except DjangoValidationError as exc:
            raise serializers.ValidationError(exc.message_dict if hasattr(exc, 'error_dict') else exc.messages)
        return attrs

    def create(self, validated_data):
        return LayeredMedium(validated_data['b'], validated_data['y'], validated_data['a'])

    def to_representation(self, instance):
        return {'b': instance.b, 'y': list(instance.y), 'a': list(instance.a)}


def load_medium(path):
    with open(path, encoding='utf-8') as handle:
        serializer = MediumSerializer(data=json.load(handle))
    serializer.is_valid(raise_exception=True)
    return serializer.save()
