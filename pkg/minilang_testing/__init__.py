"""Teste diferencial N+1-versões para MiniLang: síntese, mutação, injeção e localização."""
