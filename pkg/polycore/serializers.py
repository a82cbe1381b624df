from rest_framework import serializers

from .models import TorusPoly


class ComplexField(serializers.Field):
    """A complex number written as [re, im]; a bare real number is also accepted."""

    default_error_messages = {
        'invalid': 'Expected a number or a [re, im] pair.',
    }

    def to_internal_value(self, data):
        if isinstance(data, bool):
            self.fail('invalid')
        if isinstance(data, (int, float)):
            return complex(data, 0.0)
        if isinstance(data, (list, tuple)) and len(data) == 2:
            try:
                return complex(float(data[0]), float(data[1]))
            except (TypeError, ValueError):
                self.fail('invalid')
        self.fail('invalid')

    def to_representation(self, value):
        value = complex(value)
        return [value.real, value.imag]


class TermSerializer(serializers.Serializer):
    """One term {"e": exponents, "re": x, "im": y}."""

    e = serializers.ListField(child=serializers.IntegerField(min_value=0), allow_empty=False)
    re = serializers.FloatField()
    im = serializers.FloatField(default=0.0)


class TorusPolySerializer(serializers.Serializer):
    """JSON form {"dim": d, "terms": [...]} of a TorusPoly, terms in canonical order."""

    dim = serializers.IntegerField(min_value=1)
    terms = TermSerializer(many=True)

    def validate(self, attrs):
        for term in attrs['terms']:
            if len(term['e']) != attrs['dim']:
                raise serializers.ValidationError(
                    {'terms': f"Exponent vector {term['e']} does not have {attrs['dim']} entries."}
                )
        return attrs

    def create(self, validated_data):
        return TorusPoly(
            validated_data['dim'],
            [(term['e'], complex(term['re'], term['im'])) for term in validated_data['terms']],
        )

    def to_representation(self, instance):
        return {
            'dim': instance.dimension,
            'terms': [
                {'e': list(monomial), 're': complex(c).real, 'im': complex(c).imag}
                for monomial, c in instance.items()
            ],
        }
