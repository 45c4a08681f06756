# core arithmetic package
