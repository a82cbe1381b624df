import json

import sympy
from django.core.exceptions import ValidationError as DjangoValidationError
from rest_framework import serializers

from .models import RationalBasisInput


class SympyField(serializers.Field):
    """An exact number written as a string ("1/2", "sqrt(2)") or as an integer."""

    default_error_messages = {'invalid': 'Cannot read {value!r} as an exact number.'}

    def __init__(self, rational=False, **kwargs):
        self.rational = rational
        super().__init__(**kwargs)

    def to_internal_value(self, data):
        if isinstance(data, float) or isinstance(data, bool):
            self.fail('invalid', value=data)
        try:
            value = sympy.Rational(data) if self.rational else sympy.sympify(str(data), rational=True)
        except (TypeError, ValueError, sympy.SympifyError):
            self.fail('invalid', value=data)
        if not value.is_number:
            self.fail('invalid', value=data)
        return value

    def to_representation(self, value):
        return str(value)


class LatticeInputSerializer(serializers.Serializer):
    """{"B": [["1/2"], ["1/3"]], "b": ["1"], "field": "Q"}; B is d x D, b has D entries."""

    B = serializers.ListField(child=serializers.ListField(child=SympyField(rational=True), allow_empty=False),
                              allow_empty=False)
    b = serializers.ListField(child=SympyField(), allow_empty=False)
    field = serializers.CharField(default='Q')

    def validate(self, attrs):
        widths = {len(row) for row in attrs['B']}
        if len(widths) != 1:
            raise serializers.ValidationError({'B': 'Rows of B must have equal length.'})
        try:
            RationalBasisInput(attrs['B'], attrs['b'], attrs['field'])
        except DjangoValidationError as exc:
            raise serializers.ValidationError(exc.message_dict if hasattr(exc, 'error_dict') else exc.messages)
        return attrs

    def create(self, validated_data):
        return RationalBasisInput(validated_data['B'], validated_data['b'], validated_data['field'])

    def to_representation(self, instance):
        return {
            'B': [[str(entry) for entry in row] for row in instance.B.tolist()],
            'b': [str(value) for value in instance.b],
            'field': instance.field,
        }


class LatticeDecompositionSerializer(serializers.Serializer):
    """Read-only rendering of a decomposition: integer A, exact q and the certificate."""

    def to_representation(self, instance):
        return {
            'A': [[int(entry) for entry in row] for row in instance.A.tolist()],
            'q': [str(value) for value in instance.q],
            'q_float': instance.q_float(),
            'certificate': instance.certificate,
        }


def load_lattice_input(path):
    with open(path, encoding='utf-8') as handle:
        serializer = LatticeInputSerializer(data=json.load(handle))
    serializer.is_valid(raise_exception=True)
    return serializer.save()

