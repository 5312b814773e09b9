def test_import():
    import _kummer
