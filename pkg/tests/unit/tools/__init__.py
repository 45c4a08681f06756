# Tools unit tests package
