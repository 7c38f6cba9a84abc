# Marca 'scripts' como pacote Python
